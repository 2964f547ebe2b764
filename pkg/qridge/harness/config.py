"""
Run configuration assembled from command-line flags.
"""
import argparse
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from qridge.algorithms.alpha import LINEAR, LOG, AlphaConfig, AlphaGrid
from qridge.algorithms.predict import C1Policy, PredictConfig
from qridge.circuits.config import (
    DEFAULT_LMR_STEPS,
    DEFAULT_PRECISION_BITS,
    PhaseEstimationConfig,
)
from qridge.circuits.qft import MAX_QFT_WIDTH
from qridge.linalg.svd import DEFAULT_LAMBDA_CUTOFF
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET
from qridge.utils.error_recovery import ConfigurationError

DEFAULT_ALPHA_COUNT = 16


@dataclass(frozen=True)
class RunConfig:
    """
    Everything needed to re-run a subcommand bit for bit.

    `alpha` is in data units (predict, compare); the alpha grid is in
    Frobenius-normalized units (tune). Missing grid ends default to
    [1/kappa^2, 1].
    """
    mode: str
    data: Optional[str] = None
    x_new: Optional[List[float]] = None
    alpha: Optional[float] = None
    alpha_min: Optional[float] = None
    alpha_max: Optional[float] = None
    alpha_count: int = DEFAULT_ALPHA_COUNT
    alpha_spacing: str = LINEAR
    precision_bits: int = DEFAULT_PRECISION_BITS
    shots: int = 0
    seed: Optional[int] = None
    c1: Optional[float] = None
    c2: float = 1.0
    evolution_time: float = float(np.pi)
    exact: bool = True
    lmr_steps: int = DEFAULT_LMR_STEPS
    lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF
    qubit_budget: int = DEFAULT_QUBIT_BUDGET
    jobs: int = 1
    standardize: bool = False

    def __post_init__(self):
        if not 1 <= self.precision_bits <= MAX_QFT_WIDTH:
            raise ConfigurationError(
                f"--bits must be in 1..{MAX_QFT_WIDTH}, got {self.precision_bits}"
            )
        if not 1 <= self.qubit_budget <= DEFAULT_QUBIT_BUDGET:
            raise ConfigurationError(
                f"--qubit-budget must be in 1..{DEFAULT_QUBIT_BUDGET}, "
                f"got {self.qubit_budget}"
            )
        if self.shots < 0:
            raise ConfigurationError(f"--shots must be >= 0, got {self.shots}")
        if self.jobs < 1:
            raise ConfigurationError(f"--jobs must be >= 1, got {self.jobs}")
        if self.alpha is not None and (not np.isfinite(self.alpha) or self.alpha < 0):
            raise ConfigurationError(f"--alpha must be >= 0, got {self.alpha}")
        low = self.alpha_min
        if low is not None and (not np.isfinite(low) or low < 0):
            raise ConfigurationError(f"--alpha-min must be >= 0, got {low}")
        if self.alpha_max is not None and not np.isfinite(self.alpha_max):
            raise ConfigurationError(
                f"--alpha-max must be finite, got {self.alpha_max}"
            )
        if self.alpha_count < 1:
            raise ConfigurationError(
                f"--alpha-count must be >= 1, got {self.alpha_count}"
            )
        if self.alpha_spacing not in (LINEAR, LOG):
            raise ConfigurationError(f"--alpha-spacing must be {LINEAR} or {LOG}")
        if self.c1 is not None and self.c1 <= 0:
            raise ConfigurationError(f"--c1 must be > 0, got {self.c1}")
        if self.c2 <= 0:
            raise ConfigurationError(f"--c2 must be > 0, got {self.c2}")
        if not 0.0 <= self.lambda_cutoff < 1.0:
            raise ConfigurationError(
                f"--lambda-cutoff must lie in [0, 1), got {self.lambda_cutoff}"
            )
        self.phase_estimation()

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """Build a RunConfig from parsed CLI arguments."""
        x_new = None
        if getattr(args, "x_new", None) is not None:
            try:
                x_new = [float(v) for v in args.x_new.split(",")]
            except ValueError:
                raise ConfigurationError(
                    "--x-new must be a comma-separated list of numbers, "
                    f"got '{args.x_new}'"
                ) from None
        lmr_steps = getattr(args, "lmr_steps", None)
        return cls(
            mode=args.command,
            data=str(args.data) if getattr(args, "data", None) else None,
            x_new=x_new,
            alpha=getattr(args, "alpha", None),
            alpha_min=getattr(args, "alpha_min", None),
            alpha_max=getattr(args, "alpha_max", None),
            alpha_count=getattr(args, "alpha_count", DEFAULT_ALPHA_COUNT),
            alpha_spacing=getattr(args, "alpha_spacing", LINEAR),
            precision_bits=args.bits,
            shots=args.shots,
            seed=args.seed,
            c1=getattr(args, "c1", None),
            c2=getattr(args, "c2", 1.0),
            evolution_time=args.evolution_time,
            exact=lmr_steps is None,
            lmr_steps=lmr_steps if lmr_steps is not None else DEFAULT_LMR_STEPS,
            lambda_cutoff=args.lambda_cutoff,
            qubit_budget=args.qubit_budget,
            jobs=getattr(args, "jobs", 1),
            standardize=getattr(args, "standardize", False),
        )

    def phase_estimation(self) -> PhaseEstimationConfig:
        return PhaseEstimationConfig(
            precision_bits=self.precision_bits,
            evolution_time=self.evolution_time,
            exact_unitary=self.exact,
            lmr_steps=self.lmr_steps,
        )

    def predict_config(self) -> PredictConfig:
        return PredictConfig(
            pe=self.phase_estimation(),
            c1_policy=(
                C1Policy.auto() if self.c1 is None else C1Policy.explicit(self.c1)
            ),
            swap_test_shots=self.shots,
            seed=self.seed,
            lambda_cutoff=self.lambda_cutoff,
            qubit_budget=self.qubit_budget,
        )

    def alpha_config(self) -> AlphaConfig:
        return AlphaConfig(
            pe=self.phase_estimation(),
            c2=self.c2,
            swap_test_shots=self.shots,
            seed=self.seed,
            jobs=self.jobs,
            qubit_budget=self.qubit_budget,
            lambda_cutoff=self.lambda_cutoff,
        )

    def alpha_grid(self, kappa: float) -> AlphaGrid:
        if self.alpha_min is None and self.alpha_max is None:
            return AlphaGrid.from_condition_number(
                kappa, self.alpha_count, self.alpha_spacing
            )
        low = 1.0 / (kappa * kappa) if self.alpha_min is None else self.alpha_min
        high = 1.0 if self.alpha_max is None else self.alpha_max
        return AlphaGrid(low, high, self.alpha_count, self.alpha_spacing)

    def required_alpha(self) -> float:
        if self.alpha is None:
            raise ConfigurationError(f"{self.mode} needs --alpha")
        return self.alpha

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

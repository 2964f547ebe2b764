"""
Regularization selection: fitted-value states, the quantum training loss and
the grid search over alpha.

All alphas here are in the Frobenius-normalized problem (X / ||X||_F, unit y).
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from qridge.algorithms.design import FLAG, TARGET, PreparedDesign, prepare_design
from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import amplitude_encode
from qridge.circuits.phase_estimation import (
    CLOCK,
    add_clock,
    clock_readout,
    inverse_phase_estimation,
    phase_estimation,
)
from qridge.circuits.rotation import EigenRotationSpec, RotationMode, eigen_rotation
from qridge.circuits.swap_test import signed_swap_test
from qridge.linalg.arrays import RealVector, as_real_vector
from qridge.linalg.ridge import (
    argmin_prefer_larger,
    classical_alpha_argmin,
    classical_loss,
)
from qridge.linalg.svd import DEFAULT_LAMBDA_CUTOFF
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET, QubitRegisterLayout
from qridge.sim.state import (
    StateVector,
    discard,
    postselect,
    register_probabilities,
    tensor,
    zero_state,
)
from qridge.utils.error_recovery import (
    ConfigurationError,
    FailureLedger,
    NormalizationError,
    PostSelectionError,
    QRidgeError,
    TuneFailure,
)
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

P2_FLOOR = 1e-12
UNIT_NORM_TOLERANCE = 1e-10
LINEAR = "linear"
LOG = "log"


@dataclass(frozen=True)
class AlphaGrid:
    """Candidate alphas.

    Linear spacing: alpha_j = alpha_min + (j-1)(alpha_max-alpha_min)/(L-1).
    """
    alpha_min: float
    alpha_max: float
    count: int
    spacing: str = LINEAR

    def __post_init__(self):
        if not np.isfinite(self.alpha_min) or self.alpha_min < 0:
            raise ConfigurationError(f"alpha_min must be >= 0, got {self.alpha_min}")
        if not np.isfinite(self.alpha_max):
            raise ConfigurationError(f"alpha_max must be finite, got {self.alpha_max}")
        if self.count < 1:
            raise ConfigurationError(
                f"alpha grid needs at least one value, got count={self.count}"
            )
        if self.count > 1 and self.alpha_max <= self.alpha_min:
            raise ConfigurationError(
                f"alpha_max ({self.alpha_max}) must exceed alpha_min ({self.alpha_min})"
            )
        if self.spacing not in (LINEAR, LOG):
            raise ConfigurationError(
                f"spacing must be '{LINEAR}' or '{LOG}', got '{self.spacing}'"
            )
        if self.spacing == LOG and self.alpha_min <= 0:
            raise ConfigurationError("log spacing needs alpha_min > 0")

    @property
    def values(self) -> Tuple[float, ...]:
        if self.count == 1:
            return (float(self.alpha_min),)
        if self.spacing == LOG:
            values = np.geomspace(self.alpha_min, self.alpha_max, self.count)
            return tuple(float(v) for v in values)
        step = (self.alpha_max - self.alpha_min) / (self.count - 1)
        return tuple(float(self.alpha_min + j * step) for j in range(self.count))

    @classmethod
    def from_condition_number(
        cls, kappa: float, count: int, spacing: str = LINEAR
    ) -> "AlphaGrid":
        """Grid over [1/kappa^2, 1]; with kappa = 1 and count > 1 the lower end is 0."""
        low = 1.0 / (kappa * kappa)
        if count > 1 and low >= 1.0:
            logger.warning(
                "kappa = 1 collapses [1/kappa^2, 1]; using a linear grid over [0, 1]"
            )
            return cls(0.0, 1.0, count, LINEAR)
        return cls(low, 1.0, count, spacing)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha_min": self.alpha_min,
            "alpha_max": self.alpha_max,
            "count": self.count,
            "spacing": self.spacing,
        }


@dataclass(frozen=True)
class AlphaConfig:
    pe: PhaseEstimationConfig = field(default_factory=PhaseEstimationConfig)
    c2: float = 1.0
    swap_test_shots: int = 0
    seed: Optional[int] = None
    jobs: int = 1
    qubit_budget: int = DEFAULT_QUBIT_BUDGET
    lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF

    def __post_init__(self):
        if not np.isfinite(self.c2) or self.c2 <= 0:
            raise ConfigurationError(f"c2 must be > 0, got {self.c2}")
        if self.swap_test_shots < 0:
            raise ConfigurationError(
                f"swap_test_shots must be >= 0, got {self.swap_test_shots}"
            )
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {self.jobs}")


@dataclass(frozen=True)
class FittedState:
    state: StateVector
    p2: float
    c2: float
    clock_residual: float
    clock_readout: Dict[float, float]

    def fitted_vector(self, length: Optional[int] = None) -> RealVector:
        """y_hat = (sqrt(p2)/C2) |phi4>, truncated to the first `length` entries."""
        vector = np.real(self.state.amplitudes) * np.sqrt(self.p2) / self.c2
        return vector if length is None else vector[:length]


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    loss: float
    p2: float
    fitted_overlap: float
    c2_used: float
    loss_std_error: float = 0.0
    clock_residual: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "loss": self.loss,
            "loss_std_error": self.loss_std_error,
            "p2": self.p2,
            "fitted_overlap": self.fitted_overlap,
            "c2_used": self.c2_used,
            "clock_residual": self.clock_residual,
        }


@dataclass(frozen=True)
class TuneOutcome:
    results: Tuple[AlphaResult, ...]
    selected_alpha: float
    classical_selected_alpha: float
    classical_losses: Tuple[float, ...] = ()
    failures: Dict[float, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "results": [r.to_dict() for r in self.results],
            "selected_alpha": self.selected_alpha,
            "classical_selected_alpha": self.classical_selected_alpha,
            "classical_losses": list(self.classical_losses),
            "failures": [
                {"alpha": a, "error": msg} for a, msg in sorted(self.failures.items())
            ],
        }


def _unit_target(y: ArrayLike, length: int) -> RealVector:
    target = as_real_vector(y, "y", length)
    norm = float(np.linalg.norm(target))
    if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
        raise NormalizationError(f"y must be unit-norm, got ||y|| = {norm:.12g}")
    return target


def _design(
    X: ArrayLike, cfg: AlphaConfig, design: Optional[PreparedDesign]
) -> PreparedDesign:
    return design or prepare_design(X, cfg.pe, cfg.lambda_cutoff, cfg.qubit_budget)


def _flag_register(state: StateVector) -> StateVector:
    layout = QubitRegisterLayout.of((FLAG, 1), max_qubits=state.layout.max_qubits)
    return zero_state(layout)


def fitted_state(
    X: ArrayLike,
    y: ArrayLike,
    alpha: float,
    cfg: Optional[AlphaConfig] = None,
    design: Optional[PreparedDesign] = None,
) -> FittedState:
    """
    Prepare |phi4> proportional to sum_r [l_r/(l_r + alpha)] <u_r|y> |u_r>.

    Args:
        X: Design matrix
        y: Unit-norm target
        alpha: Normalized-space regularization, >= 0
        cfg: Algorithm configuration
        design: Reuse a PreparedDesign of X

    Returns:
        FittedState; p2 is the joint probability of a clean clock and flag |1>

    Raises:
        PostSelectionError: p2 below 1e-12 (y has no weight the filter keeps)
    """
    cfg = cfg or AlphaConfig()
    design = _design(X, cfg, design)
    pe = design.pe
    target = _unit_target(y, design.matrix.shape[0])
    if not np.isfinite(alpha) or alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha}")

    spec = EigenRotationSpec(
        mode=RotationMode.FILTER,
        alpha=float(alpha),
        constant=cfg.c2,
        precision_bits=pe.precision_bits,
        evolution_time=pe.evolution_time,
        support=design.decoded_spectrum,
    )
    encoded = amplitude_encode(
        target, TARGET, design.row_width, max_qubits=cfg.qubit_budget
    )
    state = add_clock(encoded.state, pe, CLOCK)
    state = tensor(state, _flag_register(state))
    state = phase_estimation(state, design.evolution, TARGET, pe, CLOCK)
    readout = clock_readout(state, pe, CLOCK)
    state = eigen_rotation(state, FLAG, spec, CLOCK)
    state, residual = inverse_phase_estimation(
        state, design.evolution, TARGET, pe, CLOCK
    )

    p2 = float(register_probabilities(state, FLAG)[1]) * (1.0 - residual)
    if p2 < P2_FLOOR:
        raise PostSelectionError(
            f"post-selection starved: p2 = {p2:.3g} "
            "(y is orthogonal to the retained column space)"
        )
    log_pipeline_step(
        logger, "fitted-state", "post-select", f"alpha={alpha:.6g}, p2={p2:.6g}"
    )
    phi4 = discard(postselect(state, FLAG, 1).collapsed, FLAG)
    return FittedState(
        state=phi4, p2=p2, c2=cfg.c2, clock_residual=residual, clock_readout=readout
    )


def quantum_loss(
    X: ArrayLike,
    y: ArrayLike,
    alpha: float,
    cfg: Optional[AlphaConfig] = None,
    design: Optional[PreparedDesign] = None,
    seed: Optional[int] = None,
) -> AlphaResult:
    """
    Training loss E = p2/C2^2 + 1 - 2 (sqrt(p2)/C2) <phi4|y>.

    The overlap comes from the signed swap test; `seed` overrides cfg.seed for it.
    """
    cfg = cfg or AlphaConfig()
    design = _design(X, cfg, design)
    fitted = fitted_state(X, y, alpha, cfg, design)
    reference = amplitude_encode(
        _unit_target(y, design.matrix.shape[0]),
        TARGET,
        design.row_width,
        max_qubits=cfg.qubit_budget,
    )
    swap = signed_swap_test(
        fitted.state,
        reference.state,
        cfg.swap_test_shots,
        cfg.seed if seed is None else seed,
    )
    scale = np.sqrt(fitted.p2) / cfg.c2
    loss = fitted.p2 / cfg.c2 ** 2 + 1.0 - 2.0 * scale * swap.estimate
    return AlphaResult(
        alpha=float(alpha),
        loss=float(loss),
        p2=fitted.p2,
        fitted_overlap=swap.estimate,
        c2_used=cfg.c2,
        loss_std_error=float(2.0 * scale * swap.std_error),
        clock_residual=fitted.clock_residual,
    )


def candidate_seeds(master: Optional[int], count: int) -> List[Optional[int]]:
    """Per-candidate seeds derived from (master seed, grid index)."""
    if master is None:
        return [None] * count
    return [
        int(np.random.SeedSequence([master, j]).generate_state(1)[0])
        for j in range(count)
    ]


def tune(
    X: ArrayLike, y: ArrayLike, grid: AlphaGrid, cfg: Optional[AlphaConfig] = None
) -> TuneOutcome:
    """
    Evaluate the quantum loss on every grid alpha and pick the minimizer.

    y is normalized to unit length first. Candidates run on up to cfg.jobs
    threads; results are reported in grid order. Failed candidates are listed in
    `failures` and skipped by the selection.

    Raises:
        TuneFailure: every candidate failed
    """
    cfg = cfg or AlphaConfig()
    design = prepare_design(X, cfg.pe, cfg.lambda_cutoff, cfg.qubit_budget)
    raw = as_real_vector(y, "y", design.matrix.shape[0])
    norm = float(np.linalg.norm(raw))
    if norm == 0.0:
        raise NormalizationError("y is the zero vector")
    target = raw / norm
    alphas = grid.values
    seeds = candidate_seeds(cfg.seed, len(alphas))
    logger.info(
        f"tune: {len(alphas)} candidates in [{alphas[0]:.6g}, {alphas[-1]:.6g}], "
        f"jobs={cfg.jobs}"
    )

    def evaluate(index: int):
        try:
            return quantum_loss(
                design.matrix, target, alphas[index], cfg, design, seeds[index]
            )
        except QRidgeError as e:
            return e

    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        evaluated = list(pool.map(evaluate, range(len(alphas))))

    ledger = FailureLedger()
    results: List[AlphaResult] = []
    for alpha, item in zip(alphas, evaluated):
        if isinstance(item, Exception):
            ledger.record(repr(alpha), item)
        else:
            results.append(item)
    failures = {float(key): msg for key, msg in ledger.summary().items()}
    if not results:
        raise TuneFailure(
            f"all {len(alphas)} alpha candidates failed", ledger.summary()
        )

    selected = argmin_prefer_larger(
        [r.alpha for r in results], [r.loss for r in results]
    )
    normalized = design.decomposition.normalized()
    classical_losses = tuple(classical_loss(normalized, target, a) for a in alphas)
    classical_selected = classical_alpha_argmin(normalized, target, alphas)
    logger.info(
        f"tune: selected alpha {selected:.6g} (classical {classical_selected:.6g}), "
        f"{len(failures)} failed"
    )
    return TuneOutcome(
        results=tuple(results),
        selected_alpha=selected,
        classical_selected_alpha=classical_selected,
        classical_losses=classical_losses,
        failures=failures,
    )

"""
Clock-conditioned ancilla rotations.

For every clock value c the ancilla is rotated |0> -> sqrt(1 - f^2)|0> + f|1>,
with f = C / (l + alpha) (inverse shift) or f = C l / (l + alpha) (filter),
where l is the eigenvalue decoded from c.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import ry_stack
from qridge.circuits.phase_estimation import CLOCK
from qridge.sim.state import StateVector, apply_multiplexed, register_probabilities
from qridge.utils.error_recovery import (
    ClockRegisterError,
    ConfigurationError,
    DimensionError,
    NumericalError,
    RotationSaturationError,
)
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

SATURATION_TOLERANCE = 1e-12
CLAMPED_MASS_WARNING = 1e-12


class RotationMode(Enum):
    INVERSE_SHIFT = "inverse_shift"
    FILTER = "filter"


@dataclass(frozen=True)
class EigenRotationSpec:
    """
    Rotation amplitudes for one clock width.

    `support` lists the eigenvalues the rotation is designed for; f <= 1 is
    enforced there and any other clock value that would exceed 1 is clamped.
    Without a support every decodable clock value must satisfy f <= 1.
    """
    mode: RotationMode
    alpha: float
    constant: float
    precision_bits: int
    evolution_time: float = float(np.pi)
    support: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not np.isfinite(self.constant) or self.constant <= 0:
            raise ConfigurationError(
                f"rotation constant must be > 0, got {self.constant}"
            )
        self.clock_config()

    def clock_config(self) -> PhaseEstimationConfig:
        return PhaseEstimationConfig(
            precision_bits=self.precision_bits, evolution_time=self.evolution_time
        )

    def amplitude(self, eigenvalue) -> np.ndarray:
        """
        Unclamped f: inf where l + alpha = 0 in inverse-shift mode, 0 there in
        filter mode.
        """
        lam = np.asarray(eigenvalue, dtype=np.float64)
        denominator = lam + self.alpha
        safe = np.where(denominator > 0, denominator, 1.0)
        if self.mode is RotationMode.INVERSE_SHIFT:
            return np.where(denominator > 0, self.constant / safe, np.inf)
        return np.where(denominator > 0, self.constant * lam / safe, 0.0)

    def describe(self) -> str:
        return f"C={self.constant:.6g}, alpha={self.alpha:.6g}"

    def table(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Rotation amplitude for every clock value.

        Returns:
            (f per clock value after clamping, boolean mask of clamped values)

        Raises:
            RotationSaturationError: f > 1 on the support, or anywhere when no
                support is set
        """
        cfg = self.clock_config()
        decoded = cfg.decodable_values()
        f = self.amplitude(decoded)
        over = f > 1.0 + SATURATION_TOLERANCE
        if self.support is None:
            if np.any(over):
                worst = int(np.argmax(f))
                raise RotationSaturationError(
                    f"{self.mode.value} rotation amplitude {f[worst]:.6g} > 1 at "
                    f"eigenvalue {decoded[worst]:.6g} ({self.describe()})"
                )
        else:
            designed = np.zeros_like(over)
            support = np.asarray(self.support, dtype=np.float64)
            designed[cfg.nearest_clock(support)] = True
            bad = over & designed
            if np.any(bad):
                worst = int(np.argmax(np.where(bad, f, -np.inf)))
                raise RotationSaturationError(
                    f"{self.mode.value} rotation amplitude {f[worst]:.6g} > 1 on "
                    f"the designed eigenvalue {decoded[worst]:.6g} "
                    f"({self.describe()})"
                )
        clamped = f > 1.0
        return np.minimum(f, 1.0), clamped


def eigen_rotation(
    state: StateVector, ancilla: str, spec: EigenRotationSpec, clock: str = CLOCK
) -> StateVector:
    """
    Rotate a one-qubit ancilla conditioned on the clock register.

    Args:
        state: State after phase estimation, ancilla in |0>
        ancilla: One-qubit register to rotate
        spec: Rotation mode, constants and clock settings
        clock: Clock register name

    Returns:
        State with the ancilla amplitude on |1> equal to f(decoded clock value)
    """
    if clock not in state.layout:
        raise ClockRegisterError(f"clock register '{clock}' is absent")
    if state.layout.width(clock) != spec.precision_bits:
        raise ClockRegisterError(
            f"clock register '{clock}' has {state.layout.width(clock)} qubits, "
            f"rotation needs {spec.precision_bits}"
        )
    if state.layout.width(ancilla) != 1:
        raise DimensionError(f"ancilla '{ancilla}' must be a single qubit")
    if register_probabilities(state, ancilla)[0] < 1.0 - 1e-10:
        raise NumericalError(f"ancilla '{ancilla}' is not in |0>")

    f, clamped = spec.table()
    if np.any(clamped):
        mass = float(np.sum(register_probabilities(state, clock)[clamped]))
        if mass > CLAMPED_MASS_WARNING:
            logger.warning(
                f"{mass:.3g} of the clock mass sits on saturated rotation bins"
            )
    log_pipeline_step(logger, "rotation", spec.mode.value, spec.describe())
    return apply_multiplexed(state, ry_stack(f), clock, ancilla, validate=False)

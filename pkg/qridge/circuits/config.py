"""
Phase-estimation settings shared by the evolution, clock and rotation circuits.
"""
from dataclasses import dataclass

import numpy as np

from qridge.circuits.qft import MAX_QFT_WIDTH
from qridge.utils.error_recovery import ConfigurationError, PhaseWraparoundError

DEFAULT_PRECISION_BITS = 10
DEFAULT_LMR_STEPS = 256


@dataclass(frozen=True)
class PhaseEstimationConfig:
    """
    Clock register and evolution settings.

    Attributes:
        precision_bits: Clock width t, 1..12
        evolution_time: t0 > 0, phase in radians per unit eigenvalue
        exact_unitary: Use the exact matrix exponential instead of
            partial-swap slices
        lmr_steps: Number of slices Q in sliced mode
    """
    precision_bits: int = DEFAULT_PRECISION_BITS
    evolution_time: float = float(np.pi)
    exact_unitary: bool = True
    lmr_steps: int = DEFAULT_LMR_STEPS

    def __post_init__(self):
        if not 1 <= int(self.precision_bits) <= MAX_QFT_WIDTH:
            raise ConfigurationError(
                f"precision_bits must be in 1..{MAX_QFT_WIDTH}, "
                f"got {self.precision_bits}"
            )
        if not np.isfinite(self.evolution_time) or self.evolution_time <= 0:
            raise ConfigurationError(
                f"evolution_time must be > 0, got {self.evolution_time}"
            )
        if int(self.lmr_steps) < 1:
            raise ConfigurationError(f"lmr_steps must be >= 1, got {self.lmr_steps}")

    @property
    def lmr_slice(self) -> float:
        return self.evolution_time / self.lmr_steps

    @property
    def clock_dimension(self) -> int:
        return 1 << self.precision_bits

    @property
    def resolution(self) -> float:
        """Eigenvalue spacing between neighbouring clock values."""
        return 2.0 * np.pi / (self.evolution_time * self.clock_dimension)

    def decode(self, clock_value) -> np.ndarray:
        """Clock value c -> eigenvalue estimate 2 pi c / (t0 2^t)."""
        return np.asarray(clock_value, dtype=np.float64) * self.resolution

    def decodable_values(self) -> np.ndarray:
        return self.decode(np.arange(self.clock_dimension))

    def nearest_clock(self, eigenvalue) -> np.ndarray:
        """Clock value whose decoded eigenvalue is closest to `eigenvalue`."""
        scaled = np.asarray(eigenvalue, dtype=np.float64) / self.resolution
        c = np.rint(scaled).astype(np.int64)
        return np.clip(c, 0, self.clock_dimension - 1)

    def is_dyadic(self, eigenvalue: float, tolerance: float = 1e-12) -> bool:
        scaled = eigenvalue / self.resolution
        return abs(scaled - round(scaled)) <= tolerance * max(1.0, abs(scaled))

    def check_wraparound(self, max_eigenvalue: float):
        check_wraparound(max_eigenvalue, self.evolution_time)


def check_wraparound(max_eigenvalue: float, evolution_time: float):
    """Raise unless max_eigenvalue * t0 / (2 pi) < 1."""
    phase = max_eigenvalue * evolution_time / (2.0 * np.pi)
    if phase >= 1.0:
        raise PhaseWraparoundError(
            f"eigenphase {phase:.6g} >= 1 wraps around "
            f"(eigenvalue {max_eigenvalue:.6g}, t0 {evolution_time:.6g})"
        )

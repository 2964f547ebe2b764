"""
Density-matrix exponentiation: U = e^{i rho t0}.

Exact mode diagonalizes rho. Sliced mode composes Q partial-swap channels
sigma -> tr_2[e^{i S dt} (sigma ⊗ rho) e^{-i S dt}], each consuming a fresh copy of
rho, and reports how far the composed channel is from the exact unitary one.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm, polar

from qridge.circuits.config import PhaseEstimationConfig, check_wraparound
from qridge.sim.state import DensityMatrix
from qridge.utils.error_recovery import NumericalError
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class EvolutionOperator:
    matrix: np.ndarray
    exact: bool
    evolution_time: float
    steps: Optional[int] = None
    lmr_error: Optional[float] = None
    eigenvalues: Optional[np.ndarray] = field(default=None, repr=False)
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def power(self, k: int) -> np.ndarray:
        """U^(2^k)."""
        if self.exact and self.eigenvalues is not None:
            phases = np.exp(1j * self.eigenvalues * self.evolution_time * float(1 << k))
            return (self.eigenvectors * phases) @ self.eigenvectors.conj().T
        out = self.matrix
        for _ in range(k):
            out = out @ out
        return out


def swap_operator(d: int) -> np.ndarray:
    """SWAP on two d-dimensional systems."""
    S = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            S[j * d + i, i * d + j] = 1.0
    return S


def partial_swap_superoperator(rho: np.ndarray, dt: float) -> np.ndarray:
    """
    Liouville matrix of sigma -> tr_2[W (sigma ⊗ rho) W^dagger], W = e^{i S dt}.

    Row-major vectorization: index (a, b) of sigma_ab maps to a * d + b.
    """
    d = rho.shape[0]
    W = expm(1j * dt * swap_operator(d)).reshape(d, d, d, d)
    L = np.einsum("acik,kl,bcjl->abij", W, rho, W.conj())
    return L.reshape(d * d, d * d)


def unitary_superoperator(U: np.ndarray) -> np.ndarray:
    return np.kron(U, U.conj())


def principal_unitary(L: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """
    Nearest unitary to the dominant Kraus operator of a channel, phase-aligned
    to `reference`.
    """
    d = reference.shape[0]
    choi = L.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    choi = 0.5 * (choi + choi.conj().T)
    weights, vectors = np.linalg.eigh(choi)
    kraus = vectors[:, -1].reshape(d, d)
    unitary, _ = polar(kraus)
    overlap = np.trace(reference.conj().T @ unitary)
    if abs(overlap) > 0:
        unitary = unitary * np.exp(-1j * np.angle(overlap))
    logger.debug(f"dominant Kraus weight {weights[-1]:.6g} of {np.sum(weights):.6g}")
    return unitary


def density_exponential(
    rho: DensityMatrix,
    t0: Optional[float] = None,
    cfg: Optional[PhaseEstimationConfig] = None,
) -> EvolutionOperator:
    """
    Build e^{i rho t0}.

    Args:
        rho: Validated density matrix
        t0: Evolution time; defaults to cfg.evolution_time (0 gives the identity)
        cfg: Phase-estimation settings selecting exact or sliced mode

    Returns:
        EvolutionOperator; in sliced mode lmr_error is the spectral-norm distance
        between the composed partial-swap channel and the exact unitary channel

    Raises:
        PhaseWraparoundError: largest eigenvalue * t0 / (2 pi) >= 1
    """
    cfg = cfg or PhaseEstimationConfig()
    t0 = cfg.evolution_time if t0 is None else float(t0)
    if not np.isfinite(t0) or t0 < 0:
        raise NumericalError(f"evolution time must be finite and >= 0, got {t0}")
    matrix = np.asarray(rho.matrix, dtype=np.complex128)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    check_wraparound(float(eigenvalues[-1]), t0)
    exact = (eigenvectors * np.exp(1j * eigenvalues * t0)) @ eigenvectors.conj().T

    if cfg.exact_unitary or t0 == 0:
        return EvolutionOperator(
            matrix=exact,
            exact=True,
            evolution_time=t0,
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
        )

    steps = int(cfg.lmr_steps)
    slice_channel = partial_swap_superoperator(matrix, t0 / steps)
    composed = np.linalg.matrix_power(slice_channel, steps)
    error = float(np.linalg.norm(composed - unitary_superoperator(exact), 2))
    unitary = principal_unitary(composed, exact)
    logger.info(
        f"Sliced density exponentiation: Q={steps}, dt={t0 / steps:.6g}, "
        f"channel error={error:.6g}"
    )
    return EvolutionOperator(
        matrix=unitary,
        exact=False,
        evolution_time=t0,
        steps=steps,
        lmr_error=error,
    )

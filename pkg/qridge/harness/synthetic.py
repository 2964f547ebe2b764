"""
Design matrices with a prescribed spectrum, for fixtures and experiments.
"""
from typing import Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from qridge.circuits.config import PhaseEstimationConfig
from qridge.linalg.arrays import RealMatrix, frozen
from qridge.utils.error_recovery import ConfigurationError


def _orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1))
    return ortho_group.rvs(dim=n, random_state=rng)


def make_spectral_matrix(M: int, N: int, singular_values: Sequence[float],
                         seed: Optional[int] = None) -> RealMatrix:
    """
    Random M x N matrix U diag(s) V^T with Haar-random orthogonal factors.

    Args:
        M: Rows
        N: Columns
        singular_values: Up to min(M, N) nonnegative values
        seed: Seed for the orthogonal factors
    """
    s = np.asarray(singular_values, dtype=np.float64)
    if s.ndim != 1 or s.size == 0 or s.size > min(M, N):
        raise ConfigurationError(f"need 1..{min(M, N)} singular values, got {s.size}")
    if np.any(s < 0):
        raise ConfigurationError("singular values must be >= 0")
    rng = np.random.default_rng(seed)
    U = _orthogonal(M, rng)[:, : s.size]
    V = _orthogonal(N, rng)[:, : s.size]
    return frozen((U * s) @ V.T)


def dyadic_singular_values(
    clock_values: Sequence[int], cfg: PhaseEstimationConfig
) -> np.ndarray:
    """
    Singular values whose Frobenius-normalized squares decode exactly to clock
    values.

    The clock values must add up to the value that decodes to 1, so that
    lambda_r^2 / sum(lambda^2) equals the decoded eigenvalue of clock_values[r].
    """
    c = np.asarray(clock_values, dtype=np.float64)
    eigenvalues = cfg.decode(c)
    if np.any(c <= 0) or np.any(c >= cfg.clock_dimension):
        raise ConfigurationError(
            f"clock values must lie in 1..{cfg.clock_dimension - 1}"
        )
    if abs(eigenvalues.sum() - 1.0) > 1e-12:
        raise ConfigurationError(
            f"decoded eigenvalues sum to {eigenvalues.sum():.12g}, need 1"
        )
    return np.sort(np.sqrt(eigenvalues))[::-1]

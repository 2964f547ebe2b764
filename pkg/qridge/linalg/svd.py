"""
Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
"""
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from qridge.linalg.arrays import RealMatrix, RealVector, as_real_matrix, frozen
from qridge.utils.error_recovery import (
    ConfigurationError,
    NumericalError,
    ZeroMatrixError,
)
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_LAMBDA_CUTOFF = 1e-12
JACOBI_TOLERANCE = 1e-12
MAX_SWEEPS = 80


@dataclass(frozen=True)
class SVDResult:
    """
    Reduced decomposition X_R = U diag(singular_values) V^T over the retained
    spectrum.

    When the cutoff drops singular values above rounding noise, X_R is the
    rank-R truncation of X and `discarded_mass` holds the squared singular
    values it lost.
    """
    U: RealMatrix
    V: RealMatrix
    singular_values: RealVector
    rank: int
    condition_number: float
    discarded_mass: float = 0.0

    @property
    def shape(self):
        return (self.U.shape[0], self.V.shape[0])

    @property
    def truncated(self) -> bool:
        return self.discarded_mass > 0.0

    def reconstruct(self) -> RealMatrix:
        return (self.U * self.singular_values) @ self.V.T

    @property
    def frobenius_norm(self) -> float:
        """||X_R||_F, the norm of the matrix the circuits encode."""
        return float(np.linalg.norm(self.singular_values))

    def normalized(self) -> "SVDResult":
        """Decomposition of X_R / ||X_R||_F (same singular vectors, scaled spectrum)."""
        scale = self.frobenius_norm
        return SVDResult(
            U=self.U,
            V=self.V,
            singular_values=frozen(self.singular_values / scale),
            rank=self.rank,
            condition_number=self.condition_number,
            discarded_mass=self.discarded_mass / scale ** 2,
        )


def numerical_floor(A: np.ndarray) -> float:
    """Column norms at or below this are rounding noise and count as zero."""
    return float(np.finfo(np.float64).eps * max(A.shape) * np.linalg.norm(A))


def _jacobi_orthogonalize(A: np.ndarray):
    """Rotate column pairs of A (m x n, m >= n) until they are mutually orthogonal.

    Returns the rotated A and the accumulated right rotation V with A_in @ V = A_out.
    """
    n = A.shape[1]
    V = np.eye(n)
    floor = numerical_floor(A) ** 2
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = float(A[:, p] @ A[:, p])
                beta = float(A[:, q] @ A[:, q])
                gamma = float(A[:, p] @ A[:, q])
                if alpha <= floor or beta <= floor:
                    continue
                if abs(gamma) <= JACOBI_TOLERANCE * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                sign = 1.0 if zeta >= 0 else -1.0
                t = sign / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                a_p = A[:, p].copy()
                A[:, p] = c * a_p - s * A[:, q]
                A[:, q] = s * a_p + c * A[:, q]
                v_p = V[:, p].copy()
                V[:, p] = c * v_p - s * V[:, q]
                V[:, q] = s * v_p + c * V[:, q]
        if not rotated:
            logger.debug(f"Jacobi converged after {sweep + 1} sweeps")
            return A, V
    raise NumericalError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")


def svd(X: ArrayLike, lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF) -> SVDResult:
    """
    Reduced SVD of a real matrix.

    Singular values with lambda_r <= lambda_cutoff * lambda_1 are dropped from the
    retained rank R.

    Args:
        X: Real M x N matrix
        lambda_cutoff: Relative truncation threshold, 0 <= cutoff < 1

    Returns:
        SVDResult with descending singular values
    """
    matrix = as_real_matrix(X)
    if not 0.0 <= lambda_cutoff < 1.0:
        raise ConfigurationError(
            f"lambda_cutoff must lie in [0, 1), got {lambda_cutoff}"
        )
    if not np.any(matrix):
        raise ZeroMatrixError("zero matrix has no retained spectrum")

    transposed = matrix.shape[0] < matrix.shape[1]
    work = np.array(matrix.T if transposed else matrix, dtype=np.float64)
    floor = numerical_floor(work)
    A, right = _jacobi_orthogonalize(work)

    norms = np.linalg.norm(A, axis=0)
    order = np.argsort(-norms, kind="stable")
    norms = norms[order]
    A = A[:, order]
    right = right[:, order]

    keep = (norms > lambda_cutoff * norms[0]) & (norms > floor)
    rank = int(np.count_nonzero(keep))
    sigma = norms[:rank]
    dropped = norms[rank:]
    discarded = float(np.sum(dropped[dropped > floor] ** 2))
    left = A[:, :rank] / sigma
    right = right[:, :rank]

    U, V = (right, left) if transposed else (left, right)
    kappa = float(sigma[0] / sigma[-1])
    if discarded > 0.0:
        logger.info(
            f"svd: cutoff {lambda_cutoff:.3g} truncates to rank {rank}, "
            f"discarding mass {discarded:.6g}"
        )
    logger.debug(f"svd: shape={matrix.shape}, rank={rank}, kappa={kappa:.6g}")
    return SVDResult(
        U=frozen(U),
        V=frozen(V),
        singular_values=frozen(sigma),
        rank=rank,
        condition_number=kappa,
        discarded_mass=discarded,
    )

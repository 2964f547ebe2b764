"""
Exact classical ridge regression on top of an SVDResult.

Every quantum pipeline in qridge is checked against these functions.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from qridge.linalg.arrays import RealVector, as_real_vector, frozen
from qridge.linalg.svd import SVDResult
from qridge.utils.error_recovery import (
    ConfigurationError,
    IllConditionedError,
    NormalizationError,
)
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

OLR_FLOOR = 1e-12
UNIT_NORM_TOLERANCE = 1e-10
LOSS_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RidgeSolution:
    alpha: float
    weights: RealVector

    def __post_init__(self):
        if self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not np.all(np.isfinite(self.weights)):
            raise IllConditionedError("ridge weights are not finite")


def _check_alpha(decomposition: SVDResult, alpha: float):
    if not np.isfinite(alpha) or alpha < 0:
        raise ConfigurationError(f"alpha must be a finite value >= 0, got {alpha}")
    lam = decomposition.singular_values
    if alpha == 0 and np.any(lam < OLR_FLOOR * lam[0]):
        raise IllConditionedError("ill-conditioned OLR limit")


def shrinkage(decomposition: SVDResult, alpha: float) -> RealVector:
    """sigma_r = lambda_r / (lambda_r^2 + alpha) for every retained r."""
    _check_alpha(decomposition, alpha)
    lam = decomposition.singular_values
    return lam / (lam * lam + alpha)


def filter_factors(decomposition: SVDResult, alpha: float) -> RealVector:
    """lambda_r^2 / (lambda_r^2 + alpha), the weight ridge keeps on each u_r."""
    _check_alpha(decomposition, alpha)
    lam2 = decomposition.singular_values ** 2
    return lam2 / (lam2 + alpha)


def ridge_weights(
    decomposition: SVDResult, y: ArrayLike, alpha: float
) -> RidgeSolution:
    """
    Ridge weights w = sum_r sigma_r (u_r . y) v_r.

    Args:
        decomposition: SVD of the design matrix
        y: Target vector of length M
        alpha: Regularization strength, >= 0

    Returns:
        RidgeSolution
    """
    target = as_real_vector(y, "y", decomposition.U.shape[0])
    sigma = shrinkage(decomposition, alpha)
    coefficients = sigma * (decomposition.U.T @ target)
    weights = decomposition.V @ coefficients
    return RidgeSolution(alpha=float(alpha), weights=frozen(weights))


def ridge_predict(solution: RidgeSolution, x_new: ArrayLike) -> float:
    x = as_real_vector(x_new, "x_new", solution.weights.shape[0])
    return float(x @ solution.weights)


def fitted_values(decomposition: SVDResult, y: ArrayLike, alpha: float) -> RealVector:
    """y_hat = X w, evaluated as sum_r [lambda_r^2/(lambda_r^2+alpha)] (u_r . y) u_r."""
    target = as_real_vector(y, "y", decomposition.U.shape[0])
    factors = filter_factors(decomposition, alpha)
    return frozen(decomposition.U @ (factors * (decomposition.U.T @ target)))


def classical_loss(decomposition: SVDResult, y: ArrayLike, alpha: float) -> float:
    """
    Training loss E(alpha) = ||y_hat - y||^2 for a unit-norm target.

    Raises:
        NormalizationError: if ||y|| differs from 1 by more than 1e-10
    """
    target = as_real_vector(y, "y", decomposition.U.shape[0])
    norm = float(np.linalg.norm(target))
    if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
        raise NormalizationError(
            f"classical_loss needs a unit-norm y, got ||y|| = {norm:.12g}"
        )
    residual = fitted_values(decomposition, target, alpha) - target
    return float(residual @ residual)


def residual_floor(decomposition: SVDResult, y: ArrayLike) -> float:
    """Smallest attainable loss: the mass of y outside the retained column space."""
    target = as_real_vector(y, "y", decomposition.U.shape[0])
    inside = decomposition.U.T @ target
    return max(float(target @ target - inside @ inside), 0.0)


def argmin_prefer_larger(alphas: Sequence[float], losses: Sequence[float],
                         tolerance: float = LOSS_TIE_TOLERANCE) -> float:
    """Grid argmin; losses within `tolerance` of the minimum go to the larger alpha."""
    if len(alphas) == 0:
        raise ConfigurationError("alpha grid is empty")
    best = min(losses)
    return max(a for a, loss in zip(alphas, losses) if loss <= best + tolerance)


def classical_alpha_argmin(
    decomposition: SVDResult, y: ArrayLike, grid: Sequence[float]
) -> float:
    """
    Pick the grid value with the smallest classical loss.

    Args:
        decomposition: SVD of the design matrix
        y: Unit-norm target vector
        grid: Distinct candidate alphas, all >= 0

    Returns:
        The minimizing alpha (ties go to the larger alpha)
    """
    values = [float(a) for a in grid]
    if not values:
        raise ConfigurationError("alpha grid is empty")
    if len(set(values)) != len(values):
        raise ConfigurationError("alpha grid values must be distinct")
    losses = [classical_loss(decomposition, y, a) for a in values]
    selected = argmin_prefer_larger(values, losses)
    logger.debug(f"classical argmin over {len(values)} alphas -> {selected:.6g}")
    return selected

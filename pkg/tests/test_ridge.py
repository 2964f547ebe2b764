import numpy as np
import pytest
from numpy.testing import assert_allclose

from qridge.linalg.ridge import (
    argmin_prefer_larger,
    classical_alpha_argmin,
    classical_loss,
    filter_factors,
    fitted_values,
    residual_floor,
    ridge_predict,
    ridge_weights,
    shrinkage,
)
from qridge.linalg.svd import svd
from qridge.utils.error_recovery import (
    ConfigurationError,
    IllConditionedError,
    NormalizationError,
)


class TestRidgeWeights:
    def test_shrinkage(self, half_design):
        assert_allclose(shrinkage(svd(half_design), 0.25), [0.8, 1.0])

    def test_filter_factors(self, half_design):
        assert_allclose(filter_factors(svd(half_design), 0.25), [0.8, 0.5])

    def test_prediction(self, half_design):
        solution = ridge_weights(svd(half_design), [1.0, 1.0], 0.25)
        assert_allclose(solution.weights, [0.8, 1.0])
        assert ridge_predict(solution, [1.0, 1.0]) == pytest.approx(1.8)

    def test_ordinary_least_squares_limit(self):
        solution = ridge_weights(svd(np.eye(2)), [3.0, 4.0], 0.0)
        assert_allclose(solution.weights, [3.0, 4.0])

    def test_matches_normal_equations(self, rng):
        X = rng.standard_normal((6, 3))
        y = rng.standard_normal(6)
        alpha = 0.7
        expected = np.linalg.solve(X.T @ X + alpha * np.eye(3), X.T @ y)
        assert_allclose(ridge_weights(svd(X), y, alpha).weights, expected, rtol=1e-10)

    def test_ill_conditioned_limit(self):
        decomposition = svd(np.diag([1.0, 1e-13]), lambda_cutoff=0.0)
        with pytest.raises(IllConditionedError, match="ill-conditioned OLR limit"):
            ridge_weights(decomposition, [1.0, 1.0], 0.0)

    def test_negative_alpha(self):
        with pytest.raises(ConfigurationError):
            shrinkage(svd(np.eye(2)), -0.1)


class TestLoss:
    def test_fitted_values(self, half_design):
        assert_allclose(fitted_values(svd(half_design), [1.0, 0.0], 0.25), [0.8, 0.0])

    def test_loss(self, half_design):
        assert classical_loss(svd(half_design), [1.0, 0.0], 0.25) == pytest.approx(0.04)

    def test_loss_needs_unit_target(self, half_design):
        with pytest.raises(NormalizationError):
            classical_loss(svd(half_design), [1.0, 1.0], 0.25)

    def test_residual_floor(self):
        assert residual_floor(svd([[1.0], [0.0]]), [0.6, 0.8]) == pytest.approx(0.64)

    def test_loss_increases_with_alpha(self, rng):
        decomposition = svd(rng.standard_normal((5, 3)))
        y = rng.standard_normal(5)
        y /= np.linalg.norm(y)
        losses = [classical_loss(decomposition, y, a) for a in (0.0, 0.1, 0.5, 2.0)]
        assert np.all(np.diff(losses) > 0)


class TestArgmin:
    def test_smallest_alpha_wins_for_identity(self):
        y = np.array([0.6, 0.8])
        assert classical_alpha_argmin(svd(np.eye(2)), y, [0.0, 0.5, 1.0]) == 0.0

    def test_ties_go_to_larger_alpha(self):
        decomposition = svd([[1.0], [0.0]])
        assert classical_alpha_argmin(decomposition, [0.0, 1.0], [0.1, 0.2, 0.3]) == 0.3

    def test_near_ties(self):
        assert argmin_prefer_larger([0.1, 0.2], [1.0, 1.0 + 1e-13]) == 0.2
        assert argmin_prefer_larger([0.1, 0.2], [1.0, 1.1]) == 0.1

    def test_grid_validation(self):
        with pytest.raises(ConfigurationError, match="empty"):
            classical_alpha_argmin(svd(np.eye(2)), [1.0, 0.0], [])
        with pytest.raises(ConfigurationError, match="distinct"):
            classical_alpha_argmin(svd(np.eye(2)), [1.0, 0.0], [0.1, 0.1])

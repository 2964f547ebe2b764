import numpy as np
import pytest
from numpy.testing import assert_allclose

from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.evolution import (
    density_exponential,
    partial_swap_superoperator,
    swap_operator,
)
from qridge.circuits.qft import inverse_qft, qft
from qridge.circuits.swap_test import HADAMARD
from qridge.sim.state import density_matrix
from qridge.utils.error_recovery import ConfigurationError, PhaseWraparoundError


def sliced_config(steps: int) -> PhaseEstimationConfig:
    return PhaseEstimationConfig(exact_unitary=False, lmr_steps=steps)


class TestQFT:
    @pytest.mark.parametrize("width", range(1, 9))
    def test_unitary(self, width):
        F = qft(width)
        assert np.max(np.abs(F @ F.conj().T - np.eye(1 << width))) <= 1e-12

    def test_single_qubit_is_hadamard(self):
        assert_allclose(qft(1), HADAMARD, atol=1e-15)

    def test_sign_convention(self):
        assert qft(2)[1, 1] == pytest.approx(1j / 2)

    def test_inverse(self):
        assert_allclose(inverse_qft(3) @ qft(3), np.eye(8), atol=1e-12)

    @pytest.mark.parametrize("width", [0, 13])
    def test_width_range(self, width):
        with pytest.raises(ConfigurationError):
            qft(width)


class TestPhaseEstimationConfig:
    def test_decode(self, pe10):
        assert pe10.decode(384) == pytest.approx(0.75)
        assert pe10.resolution == pytest.approx(2.0 / 1024)

    def test_dyadic(self, pe10):
        assert pe10.is_dyadic(0.75)
        assert not pe10.is_dyadic(0.8)

    def test_nearest_clock(self, pe10):
        assert int(pe10.nearest_clock(0.8)) == 410

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            PhaseEstimationConfig(precision_bits=0)
        with pytest.raises(ConfigurationError):
            PhaseEstimationConfig(evolution_time=-1.0)
        with pytest.raises(ConfigurationError):
            PhaseEstimationConfig(lmr_steps=0)


class TestDensityExponential:
    def test_exact(self):
        evolution = density_exponential(density_matrix(np.diag([0.8, 0.2])), np.pi)
        expected = np.diag(np.exp(1j * np.pi * np.array([0.8, 0.2])))
        assert_allclose(evolution.matrix, expected, atol=1e-12)
        assert evolution.exact and evolution.lmr_error is None

    def test_zero_time(self):
        evolution = density_exponential(density_matrix(np.diag([0.8, 0.2])), 0.0)
        assert_allclose(evolution.matrix, np.eye(2), atol=1e-15)

    def test_powers(self):
        evolution = density_exponential(density_matrix(np.diag([0.7, 0.3])), np.pi)
        for k in range(4):
            expected = np.linalg.matrix_power(evolution.matrix, 1 << k)
            assert_allclose(evolution.power(k), expected, atol=1e-12)

    def test_wraparound(self):
        with pytest.raises(PhaseWraparoundError):
            density_exponential(density_matrix(np.diag([1.0, 0.0])), 2.0 * np.pi)

    def test_swap_operator(self):
        S = swap_operator(2)
        assert_allclose(S, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])

    def test_slice_preserves_trace(self, rng):
        rho = np.diag([0.8, 0.2])
        L = partial_swap_superoperator(rho, 0.05)
        sigma = np.array([[0.5, 0.3], [0.3, 0.5]])
        out = (L @ sigma.reshape(-1)).reshape(2, 2)
        assert np.trace(out) == pytest.approx(1.0)

    def test_sliced_error_shrinks(self):
        rho = density_matrix(np.diag([0.8, 0.2]))
        errors = [
            density_exponential(rho, cfg=sliced_config(q)).lmr_error
            for q in (64, 128, 256, 512)
        ]
        assert all(later < earlier for earlier, later in zip(errors, errors[1:]))

    def test_sliced_unitary_close_to_exact(self):
        rho = density_matrix(np.diag([0.8, 0.2]))
        exact = density_exponential(rho)
        sliced = density_exponential(rho, cfg=sliced_config(256))
        assert not sliced.exact
        assert np.linalg.norm(sliced.matrix - exact.matrix, 2) <= 0.05
        assert_allclose(sliced.matrix @ sliced.matrix.conj().T, np.eye(2), atol=1e-10)

import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qridge.circuits.phase_estimation import CLOCK
from qridge.circuits.rotation import EigenRotationSpec, RotationMode, eigen_rotation
from qridge.sim.layout import QubitRegisterLayout
from qridge.sim.state import basis_state, register_probabilities
from qridge.utils.error_recovery import (
    ConfigurationError,
    NumericalError,
    RotationSaturationError,
)


def clock_and_flag(clock_value, bits=3, flag_value=0):
    layout = QubitRegisterLayout.of((CLOCK, bits), ("flag", 1))
    return basis_state(layout, {CLOCK: clock_value, "flag": flag_value})


def inverse_shift_spec(**kwargs):
    params = dict(
        mode=RotationMode.INVERSE_SHIFT,
        alpha=0.25,
        constant=0.75,
        precision_bits=3,
        support=(0.5,),
    )
    params.update(kwargs)
    return EigenRotationSpec(**params)


def filter_spec(alpha: float) -> EigenRotationSpec:
    return EigenRotationSpec(
        mode=RotationMode.FILTER, alpha=alpha, constant=1.0, precision_bits=3
    )


class TestRotationTable:
    def test_inverse_shift_on_support(self):
        f, clamped = inverse_shift_spec().table()
        # 3 clock bits at t0 = pi decode c to c / 4
        assert f[2] == pytest.approx(1.0)
        assert f[4] == pytest.approx(0.75 / 1.25)
        assert list(np.flatnonzero(clamped)) == [0, 1]
        assert np.all(f <= 1.0)

    def test_no_support_checks_every_value(self):
        with pytest.raises(RotationSaturationError):
            inverse_shift_spec(support=None).table()

    def test_support_violation(self):
        with pytest.raises(RotationSaturationError, match="designed"):
            inverse_shift_spec(support=(0.25,)).table()

    def test_filter(self):
        spec = filter_spec(0.5)
        f, clamped = spec.table()
        assert f[0] == 0.0
        assert f[2] == pytest.approx(0.5)
        assert not np.any(clamped)

    def test_filter_without_regularization(self):
        spec = filter_spec(0.0)
        f, _ = spec.table()
        assert_allclose(f, [0.0] + [1.0] * 7)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            inverse_shift_spec(alpha=-0.1)
        with pytest.raises(ConfigurationError):
            inverse_shift_spec(constant=0.0)
        with pytest.raises(ConfigurationError):
            inverse_shift_spec(precision_bits=0)


class TestEigenRotation:
    def test_flag_amplitude(self):
        spec = filter_spec(0.5)
        state = eigen_rotation(clock_and_flag(2), "flag", spec)
        assert register_probabilities(state, "flag")[1] == pytest.approx(0.25)

    def test_inverse_shift_amplitude(self):
        state = eigen_rotation(clock_and_flag(2), "flag", inverse_shift_spec())
        assert register_probabilities(state, "flag")[1] == pytest.approx(1.0)

    def test_clock_untouched(self):
        state = eigen_rotation(clock_and_flag(4), "flag", inverse_shift_spec())
        assert register_probabilities(state, CLOCK)[4] == pytest.approx(1.0)

    def test_saturated_mass_is_logged(self, caplog):
        with caplog.at_level(logging.WARNING, logger="qridge.circuits.rotation"):
            eigen_rotation(clock_and_flag(1), "flag", inverse_shift_spec())
        assert "saturated rotation bins" in caplog.text

    def test_ancilla_must_be_clear(self):
        with pytest.raises(NumericalError, match="not in"):
            state = clock_and_flag(2, flag_value=1)
            eigen_rotation(state, "flag", inverse_shift_spec())

    def test_clock_width(self):
        with pytest.raises(NumericalError):
            eigen_rotation(clock_and_flag(2, bits=4), "flag", inverse_shift_spec())

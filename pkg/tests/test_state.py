"""
Tests for the statevector core: layouts, unitaries, partial traces and measurement.
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from qridge.sim.layout import QubitRegisterLayout
from qridge.sim.state import (
    apply_controlled,
    apply_multiplexed,
    apply_on_qubits,
    apply_unitary,
    basis_state,
    density_matrix,
    discard,
    inner_product,
    make_state,
    partial_trace,
    postselect,
    register_probabilities,
    relabel,
    sample,
    tensor,
    zero_state,
)
from qridge.utils.error_recovery import (
    ClockRegisterError,
    DimensionError,
    LayoutError,
    NormalizationError,
    NotUnitaryError,
    PostSelectionError,
)

X_GATE = np.array([[0.0, 1.0], [1.0, 0.0]])
H_GATE = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bell_state():
    layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
    return make_state(layout, [1.0, 0.0, 0.0, 1.0])


class TestLayout:
    def test_offsets_and_axes(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 2), ("c", 3))
        assert layout.num_qubits == 6
        assert layout.offsets() == {"a": 0, "b": 1, "c": 3}
        assert layout.axes(["c", "a"]) == [3, 4, 5, 0]
        assert layout.qubit_axis("b", 1) == 2

    def test_duplicate_names(self):
        with pytest.raises(LayoutError, match="unique"):
            QubitRegisterLayout.of(("a", 1), ("a", 2))

    def test_budget(self):
        with pytest.raises(LayoutError, match="budget"):
            QubitRegisterLayout.of(("a", 20), ("b", 5))

    def test_concat_collision(self):
        with pytest.raises(LayoutError, match="collision"):
            QubitRegisterLayout.of(("a", 1)).concat(QubitRegisterLayout.of(("a", 1)))

    def test_unknown_register(self):
        with pytest.raises(LayoutError, match="unknown register"):
            QubitRegisterLayout.of(("a", 1)).width("z")


class TestConstruction:
    def test_make_state_renormalizes(self):
        state = make_state(QubitRegisterLayout.of(("q", 1)), [1.0, 1.0])
        assert_allclose(state.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_zero_vector(self):
        with pytest.raises(NormalizationError):
            make_state(QubitRegisterLayout.of(("q", 1)), [0.0, 0.0])

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            make_state(QubitRegisterLayout.of(("q", 2)), [1.0, 0.0])

    def test_basis_state_ordering(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 2))
        state = basis_state(layout, {"a": 1, "b": 2})
        assert int(np.argmax(np.abs(state.amplitudes))) == 6

    def test_tensor_appends_registers(self):
        a = make_state(QubitRegisterLayout.of(("a", 1)), [0.6, 0.8])
        b = make_state(QubitRegisterLayout.of(("b", 1)), [0.0, 1.0])
        joint = tensor(a, b)
        assert joint.layout.names == ["a", "b"]
        assert_allclose(joint.amplitudes, [0.0, 0.6, 0.0, 0.8])

    def test_relabel(self):
        state = relabel(bell_state(), ["x", "y"])
        assert state.layout.names == ["x", "y"]
        with pytest.raises(LayoutError):
            relabel(bell_state(), ["x"])


class TestUnitaries:
    def test_norm_preserved(self, rng):
        layout = QubitRegisterLayout.of(("a", 2), ("b", 3))
        amplitudes = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        state = make_state(layout, amplitudes)
        for register, width in (("a", 2), ("b", 3), ("a", 2)):
            state = apply_unitary(state, random_unitary(rng, 1 << width), register)
            assert abs(state.norm() - 1.0) <= 1e-10

    def test_not_unitary(self):
        state = zero_state(QubitRegisterLayout.of(("q", 1)))
        with pytest.raises(NotUnitaryError):
            apply_unitary(state, [[1.0, 0.0], [0.0, 2.0]], "q")

    def test_flip_second_register(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
        state = apply_unitary(zero_state(layout), X_GATE, "b")
        assert_allclose(np.abs(state.amplitudes), [0.0, 1.0, 0.0, 0.0])

    def test_controlled(self):
        layout = QubitRegisterLayout.of(("c", 1), ("t", 1))
        on = apply_controlled(basis_state(layout, {"c": 1}), X_GATE, ("c", 0), "t")
        off = apply_controlled(basis_state(layout, {"c": 0}), X_GATE, ("c", 0), "t")
        assert_allclose(np.abs(on.amplitudes), [0.0, 0.0, 0.0, 1.0])
        assert_allclose(np.abs(off.amplitudes), [1.0, 0.0, 0.0, 0.0])

    def test_control_cannot_be_target(self):
        layout = QubitRegisterLayout.of(("c", 2))
        with pytest.raises(LayoutError):
            apply_controlled(zero_state(layout), X_GATE, ("c", 0), "c")

    def test_on_qubits_targets_single_bit(self):
        layout = QubitRegisterLayout.of(("r", 2))
        state = apply_on_qubits(zero_state(layout), X_GATE, [("r", 1)])
        assert_allclose(np.abs(state.amplitudes), [0.0, 1.0, 0.0, 0.0])

    def test_multiplexed(self):
        layout = QubitRegisterLayout.of(("s", 1), ("t", 1))
        state = make_state(layout, [1.0, 0.0, 1.0, 0.0])
        state = apply_multiplexed(state, np.stack([np.eye(2), X_GATE]), "s", "t")
        assert_allclose(state.amplitudes, [1 / np.sqrt(2), 0.0, 0.0, 1 / np.sqrt(2)])

    def test_multiplexed_block_shape(self):
        layout = QubitRegisterLayout.of(("s", 1), ("t", 1))
        with pytest.raises(DimensionError):
            apply_multiplexed(zero_state(layout), np.stack([np.eye(2)]), "s", "t")


class TestMeasurement:
    def test_partial_trace_of_bell_state(self):
        rho = partial_trace(bell_state(), "a")
        assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)
        assert rho.purity() == pytest.approx(0.5)

    def test_partial_trace_random_state(self, rng):
        layout = QubitRegisterLayout.of(("a", 2), ("b", 2))
        amplitudes = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        state = make_state(layout, amplitudes)
        rho = partial_trace(state, "b")
        assert abs(rho.trace() - 1.0) <= 1e-12
        assert rho.eigenvalues().min() >= -1e-10

    def test_density_matrix_validation(self):
        with pytest.raises(NormalizationError):
            density_matrix(np.diag([0.5, 0.2]))
        with pytest.raises(NormalizationError):
            density_matrix(np.diag([1.5, -0.5]))

    def test_register_probabilities(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
        state = make_state(layout, [0.6, 0.0, 0.0, 0.8])
        assert_allclose(register_probabilities(state, "a"), [0.36, 0.64])

    def test_postselect(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
        selected = postselect(make_state(layout, [0.6, 0.0, 0.0, 0.8]), "a", 1)
        assert selected.probability == pytest.approx(0.64)
        assert selected.outcome == "1"
        assert_allclose(np.abs(selected.collapsed.amplitudes), [0.0, 0.0, 0.0, 1.0])

    def test_postselect_null_branch(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
        with pytest.raises(PostSelectionError, match="post-selection on null branch"):
            postselect(zero_state(layout), "a", "1")

    def test_discard(self):
        layout = QubitRegisterLayout.of(("a", 1), ("b", 1))
        state = discard(make_state(layout, [0.0, 0.6, 0.0, 0.8]), "b")
        assert state.layout.names == ["a"]
        assert_allclose(np.abs(state.amplitudes), [0.6, 0.8])

    def test_discard_entangled(self):
        with pytest.raises(ClockRegisterError, match="entangled"):
            discard(bell_state(), "b")

    def test_discard_only_register(self):
        with pytest.raises(LayoutError):
            discard(zero_state(QubitRegisterLayout.of(("a", 1))), "a")

    def test_sample_basis_state(self):
        layout = QubitRegisterLayout.of(("a", 2))
        assert sample(basis_state(layout, {"a": 2}), "a", 100, seed=1) == {"10": 100}

    def test_sample_is_seeded(self):
        first = sample(bell_state(), ["a", "b"], 1000, seed=11)
        second = sample(bell_state(), ["a", "b"], 1000, seed=11)
        assert first == second
        assert set(first) <= {"00", "11"}
        assert sum(first.values()) == 1000

    def test_inner_product(self):
        layout = QubitRegisterLayout.of(("q", 1))
        a = make_state(layout, [1.0, 1j])
        b = make_state(layout, [1.0, 1.0])
        assert inner_product(a, b) == pytest.approx((1 - 1j) / 2)

    def test_inner_product_layout_mismatch(self):
        with pytest.raises(LayoutError, match="layout mismatch"):
            inner_product(bell_state(), relabel(bell_state(), ["x", "y"]))

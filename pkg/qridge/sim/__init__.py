"""
Statevector simulation core.
"""
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET, QubitRegisterLayout, Register
from qridge.sim.state import (
    DensityMatrix,
    PostSelection,
    StateVector,
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

__all__ = [
    "DEFAULT_QUBIT_BUDGET",
    "DensityMatrix",
    "PostSelection",
    "QubitRegisterLayout",
    "Register",
    "StateVector",
    "apply_controlled",
    "apply_multiplexed",
    "apply_on_qubits",
    "apply_unitary",
    "basis_state",
    "density_matrix",
    "discard",
    "inner_product",
    "make_state",
    "partial_trace",
    "postselect",
    "register_probabilities",
    "relabel",
    "sample",
    "tensor",
    "zero_state",
]

"""
Exact statevector simulation over named qubit registers.

States are immutable: every operation returns a new StateVector. Internally
amplitudes are viewed as an n-axis tensor of shape [2]*n (one axis per qubit,
in layout order) so gates act with tensordot/einsum on the axes they touch.
"""
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qridge.linalg.arrays import frozen
from qridge.sim.layout import QubitRegisterLayout
from qridge.utils.error_recovery import (
    ClockRegisterError,
    DimensionError,
    LayoutError,
    NormalizationError,
    NotUnitaryError,
    PostSelectionError,
)
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

UNITARY_TOLERANCE = 1e-10
NORM_WARN_TOLERANCE = 1e-6
NULL_BRANCH = 1e-15
DENSITY_HERMITIAN_TOLERANCE = 1e-12
DENSITY_TRACE_TOLERANCE = 1e-12
DENSITY_PSD_TOLERANCE = 1e-10

RegisterNames = Union[str, Sequence[str]]
ComplexArray = NDArray[np.complex128]


def _names(registers: RegisterNames) -> List[str]:
    return [registers] if isinstance(registers, str) else list(registers)


def bits_of(value: int, width: int) -> str:
    """Bitstring of `value` over `width` qubits, most-significant bit first."""
    return format(value, f"0{width}b")


@dataclass(frozen=True)
class StateVector:
    layout: QubitRegisterLayout
    amplitudes: ComplexArray

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor_view(self) -> ComplexArray:
        return self.amplitudes.reshape([2] * self.num_qubits)

    def probabilities(self) -> NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return f"StateVector({self.layout.describe()})"


@dataclass(frozen=True)
class DensityMatrix:
    matrix: ComplexArray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> NDArray[np.float64]:
        return np.linalg.eigvalsh(self.matrix)

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def validate(self) -> "DensityMatrix":
        """Check Hermiticity, unit trace and positivity; returns self."""
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > DENSITY_HERMITIAN_TOLERANCE:
            raise NormalizationError("density matrix is not Hermitian")
        if abs(self.trace() - 1.0) > DENSITY_TRACE_TOLERANCE:
            raise NormalizationError(
                f"density matrix trace is {self.trace():.15g}, expected 1"
            )
        if np.min(self.eigenvalues()) < -DENSITY_PSD_TOLERANCE:
            raise NormalizationError("density matrix has a negative eigenvalue")
        return self


def density_matrix(matrix: ArrayLike) -> DensityMatrix:
    """Validated DensityMatrix from a square complex array."""
    m = np.asarray(matrix, dtype=np.complex128)
    return DensityMatrix(frozen(m)).validate()


@dataclass(frozen=True)
class PostSelection:
    register: str
    outcome: str
    probability: float
    collapsed: StateVector


def _wrap(layout: QubitRegisterLayout, amplitudes: np.ndarray) -> StateVector:
    flat = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    return StateVector(layout, frozen(flat))


def make_state(layout: QubitRegisterLayout, amplitudes: ArrayLike) -> StateVector:
    """
    Build a StateVector, renormalizing the amplitudes exactly.

    Args:
        layout: Register layout with n qubits
        amplitudes: 2^n complex amplitudes

    Returns:
        Normalized StateVector
    """
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape[0] != layout.dimension:
        raise DimensionError(
            f"layout ({layout.describe()}) needs {layout.dimension} amplitudes, "
            f"got {amps.shape[0]}"
        )
    if not np.all(np.isfinite(amps)):
        raise NormalizationError("amplitudes must be finite")
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise NormalizationError("cannot build a state from the zero vector")
    if abs(norm - 1.0) > NORM_WARN_TOLERANCE:
        logger.debug(f"make_state renormalized amplitudes with norm {norm:.6g}")
    return _wrap(layout, amps / norm)


def zero_state(layout: QubitRegisterLayout) -> StateVector:
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    amps[0] = 1.0
    return _wrap(layout, amps)


def basis_state(layout: QubitRegisterLayout, values: Mapping[str, int]) -> StateVector:
    """Computational basis state; registers not named in `values` are |0...0>."""
    index = 0
    for register in layout.registers:
        value = int(values.get(register.name, 0))
        if not 0 <= value < register.dimension:
            raise DimensionError(
                f"value {value} does not fit register '{register.name}'"
            )
        index = (index << register.width) | value
    unknown = set(values) - set(layout.names)
    if unknown:
        raise LayoutError(f"unknown registers {sorted(unknown)}")
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    amps[index] = 1.0
    return _wrap(layout, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product a ⊗ b with b's registers appended after a's."""
    layout = a.layout.concat(b.layout)
    return _wrap(layout, np.kron(a.amplitudes, b.amplitudes))


def relabel(state: StateVector, names: Sequence[str]) -> StateVector:
    return StateVector(state.layout.renamed(names), state.amplitudes)


def is_unitary(U: np.ndarray, tolerance: float = UNITARY_TOLERANCE) -> bool:
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))) <= tolerance


def _check_unitary(U: np.ndarray, what: str = "U"):
    if not is_unitary(U):
        raise NotUnitaryError(f"{what} is not unitary within {UNITARY_TOLERANCE:g}")


def _apply_on_axes(psi: np.ndarray, U: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply U (acting on the listed qubit axes, first axis most significant) to psi."""
    k = len(axes)
    front = np.moveaxis(psi, list(axes), list(range(k)))
    shape = front.shape
    out = (U @ front.reshape(1 << k, -1)).reshape(shape)
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_unitary(
    state: StateVector, U: ArrayLike, targets: RegisterNames, validate: bool = True
) -> StateVector:
    """
    Apply a dense unitary to the target registers, identity elsewhere.

    Args:
        state: Input state
        U: Unitary of dimension 2^(total target width)
        targets: Register name or names; the first is the most significant
        validate: Check unitarity within 1e-10

    Returns:
        Transformed state
    """
    matrix = np.asarray(U, dtype=np.complex128)
    axes = state.layout.axes(_names(targets))
    dim = 1 << len(axes)
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"unitary of shape {matrix.shape} does not act on {dim}-dim targets"
        )
    if validate:
        _check_unitary(matrix)
    return _wrap(state.layout, _apply_on_axes(state.tensor_view(), matrix, axes))


def apply_on_qubits(
    state: StateVector, U: ArrayLike, qubits: Sequence[tuple], validate: bool = True
) -> StateVector:
    """Apply U to individual (register, bit) qubits, the first pair most significant."""
    matrix = np.asarray(U, dtype=np.complex128)
    axes = [state.layout.qubit_axis(register, bit) for register, bit in qubits]
    if len(set(axes)) != len(axes):
        raise LayoutError("a qubit appears twice in the gate's operands")
    dim = 1 << len(axes)
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"unitary of shape {matrix.shape} does not act on {len(axes)} qubits"
        )
    if validate:
        _check_unitary(matrix)
    return _wrap(state.layout, _apply_on_axes(state.tensor_view(), matrix, axes))


def controlled_matrix(U: np.ndarray) -> np.ndarray:
    """Block matrix diag(I, U): U acts when the (most-significant) control is |1>."""
    d = U.shape[0]
    block = np.eye(2 * d, dtype=np.complex128)
    block[d:, d:] = U
    return block


def apply_controlled(
    state: StateVector,
    U: ArrayLike,
    control: tuple,
    targets: RegisterNames,
    validate: bool = True,
) -> StateVector:
    """
    Apply U to the targets conditioned on one control qubit being |1>.

    Args:
        state: Input state
        U: Unitary on the targets
        control: (register name, bit) with bit 0 the register's most-significant qubit
        targets: Target register name(s)
        validate: Check unitarity of U

    Returns:
        Transformed state
    """
    register, bit = control
    target_names = _names(targets)
    if register in target_names:
        raise LayoutError(f"control register '{register}' is also a target")
    matrix = np.asarray(U, dtype=np.complex128)
    target_axes = state.layout.axes(target_names)
    dim = 1 << len(target_axes)
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"unitary of shape {matrix.shape} does not act on {dim}-dim targets"
        )
    if validate:
        _check_unitary(matrix)
    axes = [state.layout.qubit_axis(register, bit)] + target_axes
    out = _apply_on_axes(state.tensor_view(), controlled_matrix(matrix), axes)
    return _wrap(state.layout, out)


def apply_multiplexed(
    state: StateVector,
    blocks: ArrayLike,
    select: RegisterNames,
    target: RegisterNames,
    validate: bool = True,
) -> StateVector:
    """
    Block-diagonal multiplexed unitary: blocks[k] acts on `target` when `select` is k.

    Args:
        state: Input state
        blocks: Array of shape (2^select_width, d, d)
        select: Select register name(s)
        target: Target register name(s)
        validate: Check every block for unitarity

    Returns:
        Transformed state
    """
    stack = np.asarray(blocks, dtype=np.complex128)
    select_axes = state.layout.axes(_names(select))
    target_axes = state.layout.axes(_names(target))
    if set(select_axes) & set(target_axes):
        raise LayoutError("select and target registers overlap")
    k_dim = 1 << len(select_axes)
    d = 1 << len(target_axes)
    if stack.shape != (k_dim, d, d):
        raise DimensionError(
            f"expected blocks of shape {(k_dim, d, d)}, got {stack.shape}"
        )
    if validate:
        for k in range(k_dim):
            _check_unitary(stack[k], f"block {k}")
    axes = select_axes + target_axes
    n = len(axes)
    front = np.moveaxis(state.tensor_view(), axes, list(range(n)))
    shape = front.shape
    out = np.einsum("kij,kjr->kir", stack, front.reshape(k_dim, d, -1)).reshape(shape)
    return _wrap(state.layout, np.moveaxis(out, list(range(n)), axes))


def _split(state: StateVector, registers: RegisterNames):
    """Matrix view with the named registers as rows and everything else as columns."""
    axes = state.layout.axes(_names(registers))
    front = np.moveaxis(state.tensor_view(), axes, list(range(len(axes))))
    return front.reshape(1 << len(axes), -1)


def partial_trace(state: StateVector, keep: RegisterNames) -> DensityMatrix:
    """
    Reduced density matrix of the kept register(s).

    Args:
        state: Pure state
        keep: Register name(s) to keep

    Returns:
        DensityMatrix tr_rest |psi><psi|
    """
    psi = _split(state, keep)
    rho = psi @ psi.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return density_matrix(rho)


def register_probabilities(
    state: StateVector, register: RegisterNames
) -> NDArray[np.float64]:
    """Exact Born distribution of the register(s), indexed by basis value."""
    psi = _split(state, register)
    return np.sum(np.abs(psi) ** 2, axis=1)


def _outcome_index(state: StateVector, register: str, outcome: Union[str, int]) -> int:
    width = state.layout.width(register)
    if isinstance(outcome, str):
        if len(outcome) != width or set(outcome) - {"0", "1"}:
            raise DimensionError(
                f"outcome '{outcome}' is not a {width}-bit string for '{register}'"
            )
        return int(outcome, 2)
    if not 0 <= outcome < (1 << width):
        raise DimensionError(f"outcome {outcome} does not fit register '{register}'")
    return int(outcome)


def postselect(
    state: StateVector, register: str, outcome: Union[str, int]
) -> PostSelection:
    """
    Project a register onto one basis value and renormalize.

    The measured register stays in the layout (it now holds `outcome`).

    Raises:
        PostSelectionError: branch probability below 1e-15
    """
    index = _outcome_index(state, register, outcome)
    width = state.layout.width(register)
    psi = _split(state, register)
    branch = psi[index]
    probability = float(np.real(np.vdot(branch, branch)))
    if probability < NULL_BRANCH:
        raise PostSelectionError(
            "post-selection on null branch "
            f"({register}={bits_of(index, width)}, p={probability:.3g})"
        )
    projected = np.zeros_like(psi)
    projected[index] = branch / np.sqrt(probability)
    axes = state.layout.axes([register])
    shaped = projected.reshape([2] * len(axes) + [2] * (state.num_qubits - len(axes)))
    restored = np.moveaxis(shaped, list(range(len(axes))), axes)
    return PostSelection(
        register=register,
        outcome=bits_of(index, width),
        probability=min(probability, 1.0),
        collapsed=_wrap(state.layout, restored),
    )


def discard(state: StateVector, register: str, tolerance: float = 1e-10) -> StateVector:
    """
    Remove a register that holds a single basis value.

    Raises:
        ClockRegisterError: the register carries more than `tolerance` mass off
            its dominant value
    """
    if len(state.layout.registers) == 1:
        raise LayoutError("cannot discard the only register of a state")
    probs = register_probabilities(state, register)
    value = int(np.argmax(probs))
    if probs[value] < 1.0 - tolerance:
        raise ClockRegisterError(
            f"register '{register}' is entangled (max basis mass {probs[value]:.12g})"
        )
    psi = _split(state, register)[value]
    return make_state(state.layout.without(register), psi)


def sample(
    state: StateVector,
    register: RegisterNames,
    shots: int,
    seed: Optional[int] = None,
) -> Dict[str, int]:
    """
    Measure a register `shots` times.

    Args:
        state: State to measure
        register: Register name(s)
        shots: Number of repetitions, >= 1
        seed: Seed for numpy.random.default_rng

    Returns:
        Histogram of bitstrings (MSB first) to counts; zero counts omitted
    """
    if shots < 1:
        raise DimensionError(f"shots must be >= 1, got {shots}")
    names = _names(register)
    width = sum(state.layout.width(n) for n in names)
    probs = register_probabilities(state, names)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {bits_of(k, width): int(c) for k, c in enumerate(counts) if c > 0}


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>; both states must share the same layout."""
    if a.layout.registers != b.layout.registers:
        raise LayoutError(
            f"layout mismatch: ({a.layout.describe()}) vs ({b.layout.describe()})"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))

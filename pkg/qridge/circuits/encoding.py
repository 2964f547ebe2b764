"""
Amplitude encoding of real vectors and matrices.

The index register is put in uniform superposition with a QFT on |0...0>, a
flag qubit is rotated by v_i / max|v| conditioned on the index, and the flag is
post-selected on |1>. The memory oracle and its uncomputation are folded into
the index-conditioned rotation.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from qridge.circuits.qft import qft
from qridge.linalg.arrays import as_real_matrix, as_real_vector
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET, QubitRegisterLayout
from qridge.sim.state import (
    StateVector,
    apply_multiplexed,
    apply_unitary,
    discard,
    postselect,
    zero_state,
)
from qridge.utils.error_recovery import DimensionError, ZeroMatrixError
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

FLAG = "encode_flag"
UNBALANCED_WARNING = 0.1


@dataclass(frozen=True)
class EncodingResult:
    state: StateVector
    success_probability: float
    source_norm: float
    max_abs: float


def register_width(length: int) -> int:
    """Qubits needed to index `length` entries (at least one)."""
    return max(1, int(np.ceil(np.log2(length)))) if length > 1 else 1


def ry_block(amplitude: float) -> np.ndarray:
    """Real rotation taking |0> to sqrt(1-a^2)|0> + a|1>."""
    c = np.sqrt(max(0.0, 1.0 - amplitude * amplitude))
    return np.array([[c, -amplitude], [amplitude, c]], dtype=np.complex128)


def ry_stack(amplitudes: np.ndarray) -> np.ndarray:
    """Stack of ry_block matrices, one per entry."""
    a = np.asarray(amplitudes, dtype=np.float64)
    c = np.sqrt(np.clip(1.0 - a * a, 0.0, None))
    stack = np.empty((a.shape[0], 2, 2), dtype=np.complex128)
    stack[:, 0, 0] = c
    stack[:, 0, 1] = -a
    stack[:, 1, 0] = a
    stack[:, 1, 1] = c
    return stack


def _prepare(
    values: np.ndarray, registers: Sequence[Tuple[str, int]], max_qubits: int
) -> Tuple[StateVector, float]:
    names = [name for name, _ in registers]
    layout = QubitRegisterLayout.of(*registers, (FLAG, 1), max_qubits=max_qubits)
    state = zero_state(layout)
    for name, width in registers:
        state = apply_unitary(state, qft(width), name, validate=False)
    peak = float(np.max(np.abs(values)))
    log_pipeline_step(
        logger,
        "encode",
        "index-conditioned rotation",
        f"registers={names}, max|v|={peak:.6g}",
    )
    state = apply_multiplexed(
        state, ry_stack(values / peak), names, FLAG, validate=False
    )
    return state, peak


def _finish(state: StateVector, values: np.ndarray, peak: float) -> EncodingResult:
    selected = postselect(state, FLAG, 1)
    encoded = discard(selected.collapsed, FLAG)
    dimension = values.size
    analytic = float(np.sum(values ** 2) / (dimension * peak ** 2))
    if analytic < UNBALANCED_WARNING:
        logger.warning(f"Unbalanced encoding: success probability {analytic:.4g}")
    return EncodingResult(
        state=encoded,
        success_probability=selected.probability,
        source_norm=float(np.linalg.norm(values)),
        max_abs=peak,
    )


def _padded_vector(v: ArrayLike, width: Optional[int]) -> Tuple[np.ndarray, int]:
    vector = as_real_vector(v, "v")
    if not np.any(vector):
        raise ZeroMatrixError("cannot amplitude-encode the zero vector")
    if width is None:
        width = register_width(vector.shape[0])
    if vector.shape[0] > (1 << width):
        raise DimensionError(
            f"vector of length {vector.shape[0]} does not fit {width} qubits"
        )
    padded = np.zeros(1 << width)
    padded[: vector.shape[0]] = vector
    return padded, width


def encoding_circuit(v: ArrayLike, register: str = "data", width: Optional[int] = None,
                     max_qubits: int = DEFAULT_QUBIT_BUDGET) -> StateVector:
    """
    Pre-measurement state of the encoding circuit: data register plus the flag qubit.

    Measuring the flag gives |1> with probability sum v_i^2 / (M max v_i^2),
    M being the padded register dimension.
    """
    padded, width = _padded_vector(v, width)
    state, _ = _prepare(padded, [(register, width)], max_qubits)
    return state


def amplitude_encode(v: ArrayLike, register: str = "data", width: Optional[int] = None,
                     max_qubits: int = DEFAULT_QUBIT_BUDGET) -> EncodingResult:
    """
    Encode a real vector as |v> = sum_i v_i/||v|| |i>.

    Args:
        v: Nonzero real vector, zero-padded to 2^width entries
        register: Name of the data register
        width: Register width; the smallest sufficient width when omitted
        max_qubits: Qubit budget for the circuit (data plus flag)

    Returns:
        EncodingResult with the post-selected state and the success probability
    """
    padded, width = _padded_vector(v, width)
    state, peak = _prepare(padded, [(register, width)], max_qubits)
    return _finish(state, padded, peak)


def padded_matrix(
    X: ArrayLike, row_width: Optional[int] = None, col_width: Optional[int] = None
) -> np.ndarray:
    matrix = as_real_matrix(X)
    rw = register_width(matrix.shape[0]) if row_width is None else row_width
    cw = register_width(matrix.shape[1]) if col_width is None else col_width
    if matrix.shape[0] > (1 << rw) or matrix.shape[1] > (1 << cw):
        raise DimensionError(
            f"matrix of shape {matrix.shape} does not fit ({rw}, {cw}) qubits"
        )
    padded = np.zeros((1 << rw, 1 << cw))
    padded[: matrix.shape[0], : matrix.shape[1]] = matrix
    return padded


def encode_matrix(X: ArrayLike, rows: str = "rows", cols: str = "cols",
                  max_qubits: int = DEFAULT_QUBIT_BUDGET) -> EncodingResult:
    """
    Encode a real matrix as |X> = sum_mn x_mn/||X||_F |m>_rows |n>_cols.

    The Schmidt coefficients of the result are the singular values of X/||X||_F.
    """
    padded = padded_matrix(X)
    if not np.any(padded):
        raise ZeroMatrixError("cannot encode the zero matrix")
    registers: List[Tuple[str, int]] = [
        (rows, register_width(padded.shape[0])),
        (cols, register_width(padded.shape[1])),
    ]
    flat = padded.reshape(-1)
    state, peak = _prepare(flat, registers, max_qubits)
    return _finish(state, flat, peak)

"""
Validated real arrays shared by the classical oracle and the circuit layers.
"""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qridge.utils.error_recovery import DimensionError, NumericalError

RealMatrix = NDArray[np.float64]
RealVector = NDArray[np.float64]


def frozen(array: np.ndarray) -> np.ndarray:
    """Return a read-only copy of `array`."""
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out


def as_real_matrix(data: ArrayLike, name: str = "X") -> RealMatrix:
    """
    Validate a dense real matrix.

    Args:
        data: Anything numpy can turn into a 2-D float array
        name: Operand name used in error messages

    Returns:
        Read-only float64 array of shape (M, N), M >= 1, N >= 1
    """
    matrix = np.asarray(data)
    if np.iscomplexobj(matrix):
        raise DimensionError(f"{name} must be real-valued")
    matrix = matrix.astype(np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise DimensionError(
            f"{name} must be a non-empty 2-D matrix, got shape {matrix.shape}"
        )
    if not np.all(np.isfinite(matrix)):
        raise NumericalError(f"{name} has non-finite entries")
    return frozen(matrix)


def as_real_vector(
    data: ArrayLike, name: str = "vector", length: Optional[int] = None
) -> RealVector:
    """
    Validate a real vector, optionally of a required length.

    Args:
        data: Anything numpy can turn into a 1-D float array
        name: Operand name used in error messages
        length: Required length, if any

    Returns:
        Read-only float64 array
    """
    vector = np.asarray(data)
    if np.iscomplexobj(vector):
        raise DimensionError(f"{name} must be real-valued")
    vector = vector.astype(np.float64)
    if vector.ndim == 0:
        vector = vector.reshape(-1)
    if vector.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {vector.shape}")
    if length is not None and vector.shape[0] != length:
        raise DimensionError(f"{name} has length {vector.shape[0]}, expected {length}")
    if not np.all(np.isfinite(vector)):
        raise NumericalError(f"{name} has non-finite entries")
    return frozen(vector)

"""
Quantum Fourier transform matrices.
"""
from functools import lru_cache

import numpy as np

from qridge.utils.error_recovery import ConfigurationError

MAX_QFT_WIDTH = 12


@lru_cache(maxsize=MAX_QFT_WIDTH)
def _qft_matrix(width: int) -> np.ndarray:
    n = 1 << width
    j = np.arange(n)
    matrix = np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    matrix.setflags(write=False)
    return matrix


def qft(width: int) -> np.ndarray:
    """
    Dense QFT on `width` qubits: entries e^{2 pi i jk / 2^width} / sqrt(2^width).

    The returned matrix is shared and read-only.
    """
    if not isinstance(width, (int, np.integer)) or not 1 <= width <= MAX_QFT_WIDTH:
        raise ConfigurationError(
            f"QFT width must be in 1..{MAX_QFT_WIDTH}, got {width}"
        )
    return _qft_matrix(int(width))


def inverse_qft(width: int) -> np.ndarray:
    return qft(width).conj().T

"""
Dense real linear algebra: SVD and the classical ridge-regression oracle.
"""
from qridge.linalg.arrays import RealMatrix, RealVector, as_real_matrix, as_real_vector
from qridge.linalg.ridge import (
    RidgeSolution,
    classical_alpha_argmin,
    classical_loss,
    fitted_values,
    ridge_predict,
    ridge_weights,
)
from qridge.linalg.svd import SVDResult, svd

__all__ = [
    "RealMatrix",
    "RealVector",
    "RidgeSolution",
    "SVDResult",
    "as_real_matrix",
    "as_real_vector",
    "classical_alpha_argmin",
    "classical_loss",
    "fitted_values",
    "ridge_predict",
    "ridge_weights",
    "svd",
]

"""
Preparation shared by both algorithms: the encoded design matrix, its reduced
density matrix on the row register and the evolution e^{i rho t0}.

Everything here lives in the Frobenius-normalized problem X_R / ||X_R||_F, where
X_R is X itself unless lambda_cutoff truncates its spectrum.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import EncodingResult, encode_matrix
from qridge.circuits.evolution import EvolutionOperator, density_exponential
from qridge.linalg.arrays import RealMatrix, as_real_matrix, frozen
from qridge.linalg.svd import DEFAULT_LAMBDA_CUTOFF, SVDResult, svd
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET
from qridge.sim.state import DensityMatrix, partial_trace
from qridge.utils.error_recovery import LayoutError
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

TARGET = "target"
INPUT = "input"
ROWS = "rows"
COLS = "cols"
FLAG = "flag"


@dataclass(frozen=True)
class PreparedDesign:
    matrix: RealMatrix
    decomposition: SVDResult
    frobenius_norm: float
    encoding: EncodingResult
    rho: DensityMatrix
    evolution: EvolutionOperator
    pe: PhaseEstimationConfig

    @property
    def normalized_eigenvalues(self) -> np.ndarray:
        """lambda_r^2 / ||X_R||_F^2 for the retained spectrum."""
        return (self.decomposition.singular_values / self.frobenius_norm) ** 2

    @property
    def decoded_spectrum(self) -> Tuple[float, ...]:
        """Nearest clock value of every retained normalized eigenvalue, decoded."""
        clocks = self.pe.nearest_clock(self.normalized_eigenvalues)
        return tuple(float(v) for v in self.pe.decode(clocks))

    @property
    def row_width(self) -> int:
        return self.encoding.state.layout.width(ROWS)

    @property
    def col_width(self) -> int:
        return self.encoding.state.layout.width(COLS)

    @property
    def condition_number(self) -> float:
        return self.decomposition.condition_number

    @property
    def lmr_error(self):
        return self.evolution.lmr_error


def effective_matrix(X: ArrayLike, decomposition: SVDResult) -> RealMatrix:
    """The matrix the circuits encode: X, or X_R when the cutoff dropped mass."""
    if decomposition.truncated:
        return frozen(decomposition.reconstruct())
    return as_real_matrix(X)


def prepare_design(
    X: ArrayLike,
    pe: PhaseEstimationConfig,
    lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF,
    qubit_budget: int = DEFAULT_QUBIT_BUDGET,
) -> PreparedDesign:
    """
    Encode X, trace out the column register and exponentiate the result.

    Args:
        X: Nonzero real design matrix
        pe: Phase-estimation settings (evolution time, exact or sliced)
        lambda_cutoff: Relative singular-value truncation; a truncated spectrum
            replaces X by its rank-R reconstruction before encoding
        qubit_budget: Maximum qubits for any circuit built on this design

    Returns:
        PreparedDesign
    """
    decomposition = svd(X, lambda_cutoff)
    matrix = effective_matrix(X, decomposition)
    frobenius = float(np.linalg.norm(matrix))
    encoding = encode_matrix(matrix, ROWS, COLS, max_qubits=qubit_budget)
    needed = encoding.state.layout.num_qubits + pe.precision_bits + 1
    if needed > qubit_budget:
        raise LayoutError(f"pipeline needs {needed} qubits, budget is {qubit_budget}")
    rho = partial_trace(encoding.state, ROWS)
    log_pipeline_step(
        logger,
        "design",
        "density matrix",
        f"dim={rho.dimension}, purity={rho.purity():.6g}",
    )
    evolution = density_exponential(rho, pe.evolution_time, pe)
    return PreparedDesign(
        matrix=matrix,
        decomposition=decomposition,
        frobenius_norm=frobenius,
        encoding=encoding,
        rho=rho,
        evolution=evolution,
        pe=pe,
    )

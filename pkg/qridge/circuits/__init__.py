"""
Circuit building blocks: encoding, QFT, density exponentiation, phase
estimation, eigenvalue rotations and swap tests.
"""
from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import (
    EncodingResult,
    amplitude_encode,
    encode_matrix,
    encoding_circuit,
)
from qridge.circuits.evolution import EvolutionOperator, density_exponential
from qridge.circuits.phase_estimation import (
    add_clock,
    clock_readout,
    inverse_phase_estimation,
    phase_estimation,
)
from qridge.circuits.qft import inverse_qft, qft
from qridge.circuits.rotation import EigenRotationSpec, RotationMode, eigen_rotation
from qridge.circuits.swap_test import SwapTestResult, signed_swap_test, swap_test

__all__ = [
    "EigenRotationSpec",
    "EncodingResult",
    "EvolutionOperator",
    "PhaseEstimationConfig",
    "RotationMode",
    "SwapTestResult",
    "add_clock",
    "amplitude_encode",
    "clock_readout",
    "density_exponential",
    "eigen_rotation",
    "encode_matrix",
    "encoding_circuit",
    "inverse_phase_estimation",
    "inverse_qft",
    "phase_estimation",
    "qft",
    "signed_swap_test",
    "swap_test",
]

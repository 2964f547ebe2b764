"""
End-to-end quantum ridge regression: prediction and alpha selection.
"""
from qridge.algorithms.alpha import (
    AlphaConfig,
    AlphaGrid,
    AlphaResult,
    FittedState,
    TuneOutcome,
    fitted_state,
    quantum_loss,
    tune,
)
from qridge.algorithms.design import PreparedDesign, effective_matrix, prepare_design
from qridge.algorithms.predict import (
    C1Policy,
    PredictConfig,
    PredictOutcome,
    predict,
    predict_diagnostic_p1,
    rescale_prediction,
)

__all__ = [
    "AlphaConfig",
    "AlphaGrid",
    "AlphaResult",
    "C1Policy",
    "FittedState",
    "PredictConfig",
    "PredictOutcome",
    "PreparedDesign",
    "TuneOutcome",
    "effective_matrix",
    "fitted_state",
    "predict",
    "predict_diagnostic_p1",
    "prepare_design",
    "quantum_loss",
    "rescale_prediction",
    "tune",
]

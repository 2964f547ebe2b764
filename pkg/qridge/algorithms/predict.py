"""
Quantum ridge prediction of a single output y' for a new input x'.

Pipeline on the Frobenius-normalized design: encode |X>, phase-estimate the
row register against e^{i rho t0}, rotate a flag by C1/(l + alpha), uncompute,
post-select the flag, and compare the remaining state with |y>|x'> in a signed
swap test.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from qridge.algorithms.design import (
    COLS,
    FLAG,
    INPUT,
    ROWS,
    TARGET,
    PreparedDesign,
    prepare_design,
)
from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import amplitude_encode
from qridge.circuits.phase_estimation import (
    CLOCK,
    add_clock,
    clock_readout,
    inverse_phase_estimation,
    phase_estimation,
)
from qridge.circuits.rotation import EigenRotationSpec, RotationMode, eigen_rotation
from qridge.circuits.swap_test import signed_swap_test
from qridge.linalg.arrays import as_real_vector
from qridge.linalg.svd import DEFAULT_LAMBDA_CUTOFF
from qridge.sim.layout import DEFAULT_QUBIT_BUDGET, QubitRegisterLayout
from qridge.sim.state import (
    StateVector,
    discard,
    postselect,
    register_probabilities,
    relabel,
    tensor,
    zero_state,
)
from qridge.utils.error_recovery import (
    ConfigurationError,
    ConsistencyError,
    PostSelectionError,
)
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

C1_SAFETY = 0.999
STARVED = 1e-12
P1_CONSISTENCY = 1e-9


@dataclass(frozen=True)
class C1Policy:
    """AUTO when value is None, otherwise an explicit C1."""
    value: Optional[float] = None

    def __post_init__(self):
        if self.value is not None and (not np.isfinite(self.value) or self.value <= 0):
            raise ConfigurationError(f"explicit C1 must be > 0, got {self.value}")

    @classmethod
    def auto(cls) -> "C1Policy":
        return cls()

    @classmethod
    def explicit(cls, value: float) -> "C1Policy":
        return cls(float(value))

    @property
    def is_auto(self) -> bool:
        return self.value is None

    def describe(self) -> str:
        return "auto" if self.is_auto else f"{self.value:.17g}"


@dataclass(frozen=True)
class PredictConfig:
    pe: PhaseEstimationConfig = field(default_factory=PhaseEstimationConfig)
    c1_policy: C1Policy = field(default_factory=C1Policy)
    swap_test_shots: int = 0
    seed: Optional[int] = None
    lambda_cutoff: float = DEFAULT_LAMBDA_CUTOFF
    qubit_budget: int = DEFAULT_QUBIT_BUDGET

    def __post_init__(self):
        if self.swap_test_shots < 0:
            raise ConfigurationError(
                f"swap_test_shots must be >= 0, got {self.swap_test_shots}"
            )
        if self.qubit_budget < 1:
            raise ConfigurationError(
                f"qubit_budget must be >= 1, got {self.qubit_budget}"
            )


@dataclass(frozen=True)
class PredictOutcome:
    y_prime: float
    y_prime_normalized: float
    p1: float
    swap_estimate: float
    c1_used: float
    clock_readout: Dict[float, float]
    lmr_error: Optional[float]
    clock_residual: float
    encoding_success: Dict[str, float]
    swap_std_error: float
    alpha_normalized: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "y_prime": self.y_prime,
            "y_prime_normalized": self.y_prime_normalized,
            "p1": self.p1,
            "swap_estimate": self.swap_estimate,
            "swap_std_error": self.swap_std_error,
            "c1_used": self.c1_used,
            "alpha_normalized": self.alpha_normalized,
            "clock_readout": [
                {"eigenvalue": k, "weight": v}
                for k, v in sorted(self.clock_readout.items())
            ],
            "clock_residual": self.clock_residual,
            "lmr_error": self.lmr_error,
            "encoding_success": dict(self.encoding_success),
        }


@dataclass(frozen=True)
class _Circuit:
    """Internals of one run, kept for diagnostics."""
    phi5: StateVector
    p1: float
    c1: float
    spec: EigenRotationSpec
    clock_probabilities: np.ndarray
    readout: Dict[float, float]
    residual: float


def rescale_prediction(
    y_normalized: float, y_norm: float, x_norm: float, frobenius_norm: float
) -> float:
    """
    Map a prediction on unit-norm y, x' and X/||X||_F back to data units.

    With lambda_hat = lambda/||X||_F and alpha_hat = alpha/||X||_F^2 every
    sigma_r scales by 1/||X||_F, so y' = ||y|| ||x'|| / ||X||_F * y_normalized.
    """
    return float(y_normalized * y_norm * x_norm / frobenius_norm)


def choose_c1(design: PreparedDesign, alpha_hat: float, policy: C1Policy) -> float:
    """C1 from the policy; AUTO is 0.999 * min of (l + alpha) over decoded l."""
    if not policy.is_auto:
        return float(policy.value)
    c1 = C1_SAFETY * min(l + alpha_hat for l in design.decoded_spectrum)
    if c1 <= 0:
        raise PostSelectionError(
            "post-selection starved: a retained eigenvalue decodes to 0 with alpha = 0 "
            "(raise precision_bits or alpha)"
        )
    return float(c1)


def _check_alpha_range(design: PreparedDesign, alpha: float):
    lam1 = float(design.decomposition.singular_values[0])
    kappa = design.condition_number
    scale_free = alpha / (lam1 * lam1)
    low = 1.0 / (kappa * kappa)
    if not low <= scale_free <= 1.0:
        logger.warning(
            f"alpha/lambda_1^2 = {scale_free:.4g} lies outside "
            f"[1/kappa^2, 1] = [{low:.4g}, 1]"
        )


def _flag_register(state: StateVector) -> StateVector:
    layout = QubitRegisterLayout.of((FLAG, 1), max_qubits=state.layout.max_qubits)
    return zero_state(layout)


def _inverse_shift_circuit(
    design: PreparedDesign, alpha_hat: float, policy: C1Policy
) -> _Circuit:
    pe = design.pe
    c1 = choose_c1(design, alpha_hat, policy)
    spec = EigenRotationSpec(
        mode=RotationMode.INVERSE_SHIFT,
        alpha=alpha_hat,
        constant=c1,
        precision_bits=pe.precision_bits,
        evolution_time=pe.evolution_time,
        support=design.decoded_spectrum,
    )
    state = add_clock(design.encoding.state, pe, CLOCK)
    state = tensor(state, _flag_register(state))
    state = phase_estimation(state, design.evolution, ROWS, pe, CLOCK)
    clock_probabilities = register_probabilities(state, CLOCK)
    readout = clock_readout(state, pe, CLOCK)
    state = eigen_rotation(state, FLAG, spec, CLOCK)
    state, residual = inverse_phase_estimation(
        state, design.evolution, ROWS, pe, CLOCK
    )

    p_flag = float(register_probabilities(state, FLAG)[1])
    p1 = p_flag * (1.0 - residual)
    if p1 < STARVED:
        raise PostSelectionError(f"post-selection starved: p1 = {p1:.3g}")
    log_pipeline_step(
        logger, "predict", "post-select", f"p1={p1:.6g}, residual={residual:.3g}"
    )
    phi5 = discard(postselect(state, FLAG, 1).collapsed, FLAG)
    return _Circuit(phi5, p1, c1, spec, clock_probabilities, readout, residual)


def _run(
    X: ArrayLike,
    y: ArrayLike,
    x_new: ArrayLike,
    alpha: float,
    cfg: PredictConfig,
    design: Optional[PreparedDesign] = None,
) -> Tuple[PredictOutcome, _Circuit]:
    if design is None:
        design = prepare_design(X, cfg.pe, cfg.lambda_cutoff, cfg.qubit_budget)
    rows, cols = design.matrix.shape
    target = as_real_vector(y, "y", rows)
    features = as_real_vector(x_new, "x_new", cols)
    if not np.isfinite(alpha) or alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha}")
    _check_alpha_range(design, alpha)

    frobenius = design.frobenius_norm
    alpha_hat = float(alpha) / frobenius ** 2
    logger.info(
        f"predict: X {rows}x{cols}, alpha={alpha:.6g} (normalized {alpha_hat:.6g}), "
        f"t={cfg.pe.precision_bits}, exact={cfg.pe.exact_unitary}"
    )
    circuit = _inverse_shift_circuit(design, alpha_hat, cfg.c1_policy)

    encoding_success = {"X": design.encoding.success_probability}
    y_norm = float(np.linalg.norm(target))
    x_norm = float(np.linalg.norm(features))
    if y_norm == 0.0 or x_norm == 0.0:
        # zero target or zero input: the prediction is 0 without a swap test
        estimate, std_error, y_normalized = 0.0, 0.0, 0.0
    else:
        budget = cfg.qubit_budget
        y_enc = amplitude_encode(target, TARGET, design.row_width, max_qubits=budget)
        x_enc = amplitude_encode(features, INPUT, design.col_width, max_qubits=budget)
        encoding_success["y"] = y_enc.success_probability
        encoding_success["x_new"] = x_enc.success_probability
        phi6 = relabel(tensor(y_enc.state, x_enc.state), [ROWS, COLS])
        swap = signed_swap_test(circuit.phi5, phi6, cfg.swap_test_shots, cfg.seed)
        estimate, std_error = swap.estimate, swap.std_error
        y_normalized = estimate * np.sqrt(circuit.p1) / circuit.c1

    outcome = PredictOutcome(
        y_prime=rescale_prediction(y_normalized, y_norm, x_norm, frobenius),
        y_prime_normalized=float(y_normalized),
        p1=circuit.p1,
        swap_estimate=float(estimate),
        c1_used=circuit.c1,
        clock_readout=circuit.readout,
        lmr_error=design.lmr_error,
        clock_residual=circuit.residual,
        encoding_success=encoding_success,
        swap_std_error=float(std_error) * np.sqrt(circuit.p1) / circuit.c1,
        alpha_normalized=alpha_hat,
    )
    logger.info(
        f"predict: y'={outcome.y_prime:.10g} "
        f"(normalized {outcome.y_prime_normalized:.10g}), "
        f"p1={outcome.p1:.6g}, C1={outcome.c1_used:.6g}"
    )
    return outcome, circuit


def predict(
    X: ArrayLike,
    y: ArrayLike,
    x_new: ArrayLike,
    alpha: float,
    cfg: Optional[PredictConfig] = None,
    design: Optional[PreparedDesign] = None,
) -> PredictOutcome:
    """
    Predict y' = x' . w_ridge with the quantum circuit.

    Args:
        X: Design matrix (M x N), nonzero
        y: Targets (length M)
        x_new: New input (length N)
        alpha: Regularization in data units, >= 0
        cfg: Pipeline configuration
        design: Reuse a PreparedDesign built from the same X and cfg

    Returns:
        PredictOutcome; swap_std_error is the shot error of y_prime_normalized
    """
    outcome, _ = _run(X, y, x_new, alpha, cfg or PredictConfig(), design)
    return outcome


def predict_diagnostic_p1(
    X: ArrayLike,
    y: ArrayLike,
    x_new: ArrayLike,
    alpha: float,
    cfg: Optional[PredictConfig] = None,
) -> float:
    """
    Run predict and check p1 against sum_c w_c f_c^2 over the clock readout.

    The check is applied when the clock came back clean (residual below 1e-12).

    Raises:
        ConsistencyError: p1 and the readout sum differ by more than 1e-9
    """
    outcome, circuit = _run(X, y, x_new, alpha, cfg or PredictConfig())
    f, _ = circuit.spec.table()
    expected = float(np.sum(circuit.clock_probabilities * f ** 2))
    if circuit.residual < 1e-12 and abs(expected - outcome.p1) > P1_CONSISTENCY:
        raise ConsistencyError(
            f"p1 = {outcome.p1:.15g} but clock readout gives {expected:.15g}"
        )
    return outcome.p1

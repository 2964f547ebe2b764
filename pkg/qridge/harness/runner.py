"""
Experiment orchestration: each subcommand runs the quantum pipeline, the
classical SVD oracle and the error-bound check, and returns a Report.
"""
from dataclasses import replace
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.typing import ArrayLike

from qridge.algorithms.alpha import candidate_seeds, tune
from qridge.algorithms.design import effective_matrix, prepare_design
from qridge.algorithms.predict import predict
from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.encoding import encode_matrix
from qridge.circuits.qft import MAX_QFT_WIDTH
from qridge.harness.config import RunConfig
from qridge.harness.dataset import Dataset, standardize
from qridge.harness.report import Report
from qridge.linalg.ridge import fitted_values, ridge_predict, ridge_weights
from qridge.linalg.svd import svd
from qridge.utils.error_recovery import DatasetError
from qridge.utils.logging_config import get_logger

logger = get_logger(__name__)

BOUND_FACTOR = 5.0
SHOT_SIGMAS = 4.0


def error_bound(kappa: float, precision_bits: int) -> float:
    """Accuracy target for normalized quantities: 5 kappa^2 2^-t."""
    return float(BOUND_FACTOR * kappa * kappa * 2.0 ** (-precision_bits))


def prepare_dataset(dataset: Dataset, config: RunConfig) -> Dataset:
    if config.standardize and not dataset.standardized:
        return standardize(dataset)
    return dataset


def _normalized_prediction(
    raw: float, y_norm: float, x_norm: float, frobenius: float
) -> float:
    if y_norm == 0.0 or x_norm == 0.0:
        return 0.0
    return float(raw * frobenius / (y_norm * x_norm))


def _relative(error: float, reference: float) -> Optional[float]:
    return error / abs(reference) if reference != 0.0 else None


def run_predict(
    dataset: Dataset, x_new: ArrayLike, alpha: float, config: RunConfig
) -> Report:
    """
    Quantum prediction for one new input against the classical ridge oracle.

    The bound check runs on the normalized scale:
    |y'_q - y'_c| <= 5 kappa^2 2^-t + 4 shot standard errors.
    """
    dataset = prepare_dataset(dataset, config)
    x = dataset.transform_features(x_new)
    cfg = config.predict_config()
    design = prepare_design(dataset.X, cfg.pe, cfg.lambda_cutoff, cfg.qubit_budget)
    outcome = predict(dataset.X, dataset.y, x, alpha, cfg, design)

    weights = ridge_weights(design.decomposition, dataset.y, alpha)
    classical_raw = ridge_predict(weights, x)
    classical_normalized = _normalized_prediction(
        classical_raw, dataset.y_norm, float(np.linalg.norm(x)), design.frobenius_norm
    )
    bound = error_bound(design.condition_number, cfg.pe.precision_bits)
    margin = SHOT_SIGMAS * outcome.swap_std_error
    normalized_error = abs(outcome.y_prime_normalized - classical_normalized)
    raw_error = abs(outcome.y_prime - classical_raw)
    within = normalized_error <= bound + margin
    if not within:
        logger.warning(
            f"predict: normalized error {normalized_error:.3g} exceeds bound "
            f"{bound + margin:.3g}"
        )

    result = outcome.to_dict()
    result["y_prime_data"] = outcome.y_prime + dataset.y_mean
    return Report(
        mode="predict",
        config=config.to_dict(),
        dataset=dataset.summary(),
        outcome=result,
        classical={
            "y_prime": classical_raw + dataset.y_mean,
            "y_prime_normalized": classical_normalized,
            "condition_number": design.condition_number,
            "rank": design.decomposition.rank,
        },
        checks={
            "err_bound": bound,
            "shot_margin": margin,
            "abs_error_normalized": normalized_error,
            "abs_error": raw_error,
            "rel_error": _relative(raw_error, classical_raw),
        },
        within_bound=bool(within),
    )


def _loss_gap(losses: List[float]) -> float:
    if len(losses) < 2:
        return float("inf")
    ordered = sorted(losses)
    return ordered[1] - ordered[0]


def run_tune(dataset: Dataset, config: RunConfig) -> Report:
    """
    Quantum and classical loss curves over the alpha grid.

    Every successful candidate must match the classical loss within the bound;
    when the classical losses are separated by more than twice the bound the
    two selections must also agree.
    """
    dataset = prepare_dataset(dataset, config)
    if dataset.num_rows < 2:
        raise DatasetError(f"tune needs at least 2 rows, got {dataset.num_rows}")
    kappa = svd(dataset.X, config.lambda_cutoff).condition_number
    grid = config.alpha_grid(kappa)
    cfg = config.alpha_config()
    outcome = tune(dataset.X, dataset.y, grid, cfg)

    bound = error_bound(kappa, cfg.pe.precision_bits)
    classical_by_alpha = dict(zip(grid.values, outcome.classical_losses))
    pointwise = []
    for result in outcome.results:
        classical = classical_by_alpha[result.alpha]
        error = abs(result.loss - classical)
        allowed = bound + SHOT_SIGMAS * result.loss_std_error
        pointwise.append({
            "alpha": result.alpha,
            "abs_error": error,
            "allowed": allowed,
            "within": bool(error <= allowed),
        })
    pointwise_ok = all(p["within"] for p in pointwise)
    gap = _loss_gap(list(outcome.classical_losses))
    selection_binding = gap > 2.0 * bound
    agrees = outcome.selected_alpha == outcome.classical_selected_alpha
    within = pointwise_ok and (agrees or not selection_binding)
    logger.info(
        f"tune: selected {outcome.selected_alpha:.6g}, "
        f"classical {outcome.classical_selected_alpha:.6g}, within bound: {within}"
    )

    return Report(
        mode="tune",
        config=config.to_dict(),
        dataset=dataset.summary(),
        outcome={**outcome.to_dict(), "grid": grid.to_dict()},
        classical={
            "losses": [
                {"alpha": a, "loss": loss} for a, loss in classical_by_alpha.items()
            ],
            "selected_alpha": outcome.classical_selected_alpha,
            "condition_number": kappa,
        },
        checks={
            "err_bound": bound,
            "pointwise": pointwise,
            "loss_gap": gap,
            "selection_binding": bool(selection_binding),
            "selection_agrees": bool(agrees),
        },
        within_bound=bool(within),
    )


def run_compare(dataset: Dataset, alpha: float, config: RunConfig) -> Report:
    """
    Quantum prediction of every training row against the classical fitted values.

    All-zero rows predict 0 without running a circuit.
    """
    dataset = prepare_dataset(dataset, config)
    cfg = config.predict_config()
    design = prepare_design(dataset.X, cfg.pe, cfg.lambda_cutoff, cfg.qubit_budget)
    classical = fitted_values(design.decomposition, dataset.y, alpha)
    bound = error_bound(design.condition_number, cfg.pe.precision_bits)
    seeds = candidate_seeds(cfg.seed, dataset.num_rows)

    rows: List[Dict[str, Any]] = []
    for i, x in enumerate(dataset.X):
        x_norm = float(np.linalg.norm(x))
        if x_norm == 0.0:
            quantum, quantum_normalized, margin = 0.0, 0.0, 0.0
        else:
            row_cfg = replace(cfg, seed=seeds[i])
            outcome = predict(dataset.X, dataset.y, x, alpha, row_cfg, design)
            quantum, quantum_normalized = outcome.y_prime, outcome.y_prime_normalized
            margin = SHOT_SIGMAS * outcome.swap_std_error
        classical_normalized = _normalized_prediction(
            float(classical[i]), dataset.y_norm, x_norm, design.frobenius_norm
        )
        error = abs(quantum_normalized - classical_normalized)
        rows.append({
            "row": i + 1,
            "quantum": quantum + dataset.y_mean,
            "classical": float(classical[i]) + dataset.y_mean,
            "abs_error": abs(quantum - float(classical[i])),
            "abs_error_normalized": error,
            "within": bool(error <= bound + margin),
        })
    within = all(r["within"] for r in rows)
    passed = sum(r["within"] for r in rows)
    logger.info(f"compare: {passed}/{len(rows)} rows within bound")

    return Report(
        mode="compare",
        config=config.to_dict(),
        dataset=dataset.summary(),
        outcome={"rows": rows, "lmr_error": design.lmr_error},
        classical={
            "condition_number": design.condition_number,
            "rank": design.decomposition.rank,
        },
        checks={
            "err_bound": bound,
            "max_abs_error_normalized": max(r["abs_error_normalized"] for r in rows),
        },
        within_bound=bool(within),
    )


def dyadic_flags(
    eigenvalues: np.ndarray, evolution_time: float
) -> Dict[str, List[bool]]:
    """Per clock width t, whether each normalized eigenvalue is an exact t-bit value."""
    flags = {}
    for t in range(1, MAX_QFT_WIDTH + 1):
        pe = PhaseEstimationConfig(precision_bits=t, evolution_time=evolution_time)
        flags[str(t)] = [bool(pe.is_dyadic(float(v))) for v in eigenvalues]
    return flags


def run_spectrum(dataset: Dataset, config: RunConfig) -> Report:
    """
    Singular values, normalized spectrum, kappa, rank and dyadic compatibility.

    With a truncating --lambda-cutoff every figure describes the rank-R matrix
    the circuits encode; `discarded_mass` is the squared spectrum it dropped.
    """
    dataset = prepare_dataset(dataset, config)
    decomposition = svd(dataset.X, config.lambda_cutoff)
    normalized = decomposition.normalized().singular_values ** 2
    pe = config.phase_estimation()
    matrix = effective_matrix(dataset.X, decomposition)
    encoding = encode_matrix(matrix, max_qubits=config.qubit_budget)
    kappa = decomposition.condition_number
    logger.info(f"spectrum: rank {decomposition.rank}, kappa {kappa:.6g}")

    return Report(
        mode="spectrum",
        config=config.to_dict(),
        dataset=dataset.summary(),
        outcome={
            "singular_values": list(decomposition.singular_values),
            "normalized_eigenvalues": list(normalized),
            "decoded_eigenvalues": list(pe.decode(pe.nearest_clock(normalized))),
            "condition_number": kappa,
            "rank": decomposition.rank,
            "frobenius_norm": decomposition.frobenius_norm,
            "discarded_mass": decomposition.discarded_mass,
            "dyadic": dyadic_flags(normalized, config.evolution_time),
            "encoding_success": encoding.success_probability,
        },
        classical={},
        checks={"err_bound": error_bound(kappa, config.precision_bits)},
        within_bound=True,
    )

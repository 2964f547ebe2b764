"""
Phase estimation of U = e^{i rho t0} into a clock register, and its inverse.

Clock bit b (bit 0 = most significant) controls U^(2^(t-1-b)). The clock is
prepared with the QFT and read out through the inverse QFT, so an eigenphase
phi = lambda t0 / (2 pi) lands on clock value round(2^t phi).
"""
from typing import Dict, Optional, Tuple

import numpy as np

from qridge.circuits.config import PhaseEstimationConfig
from qridge.circuits.evolution import EvolutionOperator
from qridge.circuits.qft import inverse_qft, qft
from qridge.sim.layout import QubitRegisterLayout
from qridge.sim.state import (
    StateVector,
    apply_controlled,
    apply_unitary,
    discard,
    postselect,
    register_probabilities,
    tensor,
    zero_state,
)
from qridge.utils.error_recovery import ClockRegisterError, DimensionError
from qridge.utils.logging_config import get_logger, log_pipeline_step

logger = get_logger(__name__)

CLOCK = "clock"
CLEAN_CLOCK_TOLERANCE = 1e-10
READOUT_FLOOR = 1e-12

def add_clock(
    state: StateVector, cfg: PhaseEstimationConfig, clock: str = CLOCK
) -> StateVector:
    """Append a |0...0> clock register of cfg.precision_bits qubits."""
    layout = QubitRegisterLayout.of(
        (clock, cfg.precision_bits), max_qubits=state.layout.max_qubits
    )
    return tensor(state, zero_state(layout))


def _check_registers(
    state: StateVector,
    evolution: EvolutionOperator,
    target: str,
    clock: str,
    cfg: PhaseEstimationConfig,
):
    if clock not in state.layout:
        raise ClockRegisterError(
            f"clock register '{clock}' is absent (layout {state.layout.describe()})"
        )
    if state.layout.width(clock) != cfg.precision_bits:
        raise ClockRegisterError(
            f"clock register '{clock}' has {state.layout.width(clock)} qubits, "
            f"config needs {cfg.precision_bits}"
        )
    if state.layout.register(target).dimension != evolution.dimension:
        raise DimensionError(
            f"evolution of dimension {evolution.dimension} does not act on "
            f"register '{target}'"
        )


def _controlled_powers(
    state: StateVector,
    evolution: EvolutionOperator,
    target: str,
    clock: str,
    t: int,
    inverse: bool,
) -> StateVector:
    for b in range(t):
        power = evolution.power(t - 1 - b)
        if inverse:
            power = power.conj().T
        state = apply_controlled(state, power, (clock, b), target, validate=False)
    return state


def phase_estimation(
    state: StateVector,
    evolution: EvolutionOperator,
    target: str,
    cfg: PhaseEstimationConfig,
    clock: str = CLOCK,
) -> StateVector:
    """
    Write the eigenphases of `evolution` on `target` into the clock register.

    Args:
        state: State containing `target` and a clean clock register
        evolution: U = e^{i rho t0}
        target: Register U acts on
        cfg: Phase-estimation settings (clock width)
        clock: Clock register name

    Returns:
        State with eigencomponents entangled with their clock values

    Raises:
        ClockRegisterError: clock missing, of the wrong width, or not in |0...0>
    """
    _check_registers(state, evolution, target, clock, cfg)
    clean = register_probabilities(state, clock)[0]
    if clean < 1.0 - CLEAN_CLOCK_TOLERANCE:
        raise ClockRegisterError(
            f"clock register '{clock}' is dirty (mass on |0> is {clean:.12g})"
        )
    t = cfg.precision_bits
    log_pipeline_step(logger, "phase-estimation", "forward", f"target={target}, t={t}")
    state = apply_unitary(state, qft(t), clock, validate=False)
    state = _controlled_powers(state, evolution, target, clock, t, inverse=False)
    return apply_unitary(state, inverse_qft(t), clock, validate=False)


def inverse_phase_estimation(
    state: StateVector,
    evolution: EvolutionOperator,
    target: str,
    cfg: PhaseEstimationConfig,
    clock: str = CLOCK,
    tolerance: Optional[float] = None,
) -> Tuple[StateVector, float]:
    """
    Undo phase estimation, project the clock onto |0...0> and remove it.

    Args:
        state: Output of phase_estimation, possibly after an eigenvalue rotation
        evolution: The same U used in the forward pass
        target: Register U acts on
        cfg: Phase-estimation settings
        clock: Clock register name
        tolerance: Raise when the clock mass off |0...0> exceeds this

    Returns:
        (state without the clock, residual clock mass that was projected out)
    """
    _check_registers(state, evolution, target, clock, cfg)
    t = cfg.precision_bits
    log_pipeline_step(
        logger, "phase-estimation", "uncompute", f"target={target}, t={t}"
    )
    state = apply_unitary(state, qft(t), clock, validate=False)
    state = _controlled_powers(state, evolution, target, clock, t, inverse=True)
    state = apply_unitary(state, inverse_qft(t), clock, validate=False)

    residual = float(max(0.0, 1.0 - register_probabilities(state, clock)[0]))
    if tolerance is not None and residual > tolerance:
        raise ClockRegisterError(
            f"clock register '{clock}' left entangled: "
            f"residual {residual:.3g} > {tolerance:.3g}"
        )
    if residual > 1e-6:
        logger.warning(
            f"Clock residual {residual:.3g} projected out after inverse phase "
            "estimation"
        )
    selected = postselect(state, clock, 0)
    return discard(selected.collapsed, clock), residual


def clock_readout(
    state: StateVector, cfg: PhaseEstimationConfig, clock: str = CLOCK
) -> Dict[float, float]:
    """Decoded eigenvalue -> probability for clock values with mass above 1e-12."""
    probs = register_probabilities(state, clock)
    decoded = cfg.decode(np.arange(probs.shape[0]))
    return {
        float(decoded[c]): float(p)
        for c, p in enumerate(probs)
        if p > READOUT_FLOOR
    }

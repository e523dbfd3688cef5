"""Online drift-plus-penalty controller for the obfuscation weightage.

Tracks the per-slot advertising-request queue, evaluates the quadratic
Lyapunov drift and penalty terms, and selects the obfuscation weightage per
profiling state each slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .profiler import ProfileState


class ControlError(ValueError):
    """Raised on invalid controller parameters or inputs."""


class StateCase(enum.Enum):
    STABLE = "stable"
    DEVEVO_PMIN = "devevo_pmin"
    DEVEVO_PAVG = "devevo_pavg"
    DEVEVO_PMAX = "devevo_pmax"


@dataclass(frozen=True)
class ControlParams:
    V: float = 5.0            # performance / trade-off weight
    beta: float = 1.0         # privacy vs targeted-ads knob
    epsilon: float = 0.5      # apps-usage (flattening budget) knob
    p_target: float = 0.0     # desired time-average penalty p'(t)
    C_cost: float = 1.0       # operating cost per unit weightage
    c_min: float = 0.01       # per-slot profile-change lower bound
    c_max: float = 0.25       # per-slot profile-change upper bound
    pavg_midpoint: bool = False  # substitute (eta_min+eta_max)/2 in the p_avg rule

    def __post_init__(self):
        if self.V < 0 or self.beta < 0 or self.epsilon < 0 or self.C_cost < 0:
            raise ControlError("V, beta, epsilon, C_cost must be non-negative")
        if not (0 <= self.c_min <= self.c_max):
            raise ControlError("require 0 <= c_min <= c_max")


@dataclass(frozen=True)
class QueueState:
    R: float = 0.0   # current request-queue value R_l^t
    t: int = 0
    Q: float = 0.0   # cumulative sum of squared queue values
    B: float = 0.0   # drift bound constant

    def __post_init__(self):
        if self.Q < 0 or self.B < 0:
            raise ControlError("Q and B must be non-negative")


@dataclass(frozen=True)
class ControlDecision:
    eta: float            # chosen obfuscation weightage
    objective: float      # lower of the evaluated case objectives
    case: StateCase
    penalty: float        # p(t) at the chosen weightage
    case_objective: float = 0.0  # development/evolution-case evaluation


def track_request(i_g_t: float, c_min: float) -> float:
    """Initial queue value: the slot's profile change shifted by the lower bound."""
    if c_min > i_g_t:
        raise ControlError(f"c_min {c_min} exceeds profile change {i_g_t}")
    return i_g_t - c_min


def advance_queue(state: QueueState, i_g_t: float) -> QueueState:
    """Shift the queue forward one slot: R' = I_g^t + R."""
    r_next = i_g_t + state.R
    return replace(state, R=r_next, t=state.t + 1, Q=state.Q + r_next * r_next)


def lyapunov(r_history: list[float]) -> float:
    """Quadratic Lyapunov value: sum of squared queue values."""
    return sum(r * r for r in r_history)


def drift(q_next: float, q_now: float) -> float:
    """Single-sample Lyapunov drift estimate."""
    if q_next < 0 or q_now < 0:
        raise ControlError("Lyapunov values must be non-negative")
    return q_next - q_now


def penalty(params: ControlParams, eta: float, i_g_t: float) -> float:
    """Per-slot penalty: operating cost plus the two privacy terms."""
    return params.C_cost * eta + params.beta * (i_g_t + eta) + params.beta * i_g_t


def compute_B(c_max: float, c_min: float) -> float:
    """Drift bound constant: half the larger per-slot change bound."""
    if c_max < 0 or c_min < 0:
        raise ControlError("change bounds must be non-negative")
    return 0.5 * max(c_max, c_min)


def penalty_bound(params: ControlParams, B: float, r_1: float, t: int) -> float:
    """Upper bound on the time-average penalty at slot t."""
    if params.V <= 0:
        raise ControlError("penalty bound requires V > 0")
    if t < 1:
        raise ControlError("t must be >= 1")
    return params.p_target + B / params.V + r_1 / (params.V * t)


def worst_case_penalty(
    params: ControlParams, bounds: tuple[float, float, float]
) -> float:
    """Largest per-slot penalty any decision can realize under the bounds.

    The chosen weightage never exceeds eta_max + eta_lp_max and the per-slot
    change never exceeds c_max, so this is a valid (conservative) penalty
    target p' for which the average-penalty bound holds at every slot.
    """
    _, eta_max, eta_lp_max = bounds
    return penalty(params, eta_max + eta_lp_max, params.c_max)


def request_scenario(params: ControlParams, i_g_t: float) -> StateCase:
    """Classify the slot's request level into the p_min / p_avg / p_max cases.

    Terciles of [c_min, c_max] split the per-slot change magnitude.
    """
    span = params.c_max - params.c_min
    lo = params.c_min + span / 3.0
    hi = params.c_min + 2.0 * span / 3.0
    if i_g_t <= lo:
        return StateCase.DEVEVO_PMIN
    if i_g_t >= hi:
        return StateCase.DEVEVO_PMAX
    return StateCase.DEVEVO_PAVG


def devevo_objective(
    params: ControlParams, eta: float, i_g_t: float, p_r: float
) -> float:
    """Development/evolution-case evaluation: p(R_l^t) + V * penalty terms."""
    return p_r + params.V * (
        params.C_cost * eta + params.beta * (i_g_t + eta) + params.beta * i_g_t
    )


def control_step(
    state: QueueState,
    profile_state: ProfileState,
    i_g_t: float,
    bounds: tuple[float, float, float],
    params: ControlParams,
) -> ControlDecision:
    """Select the obfuscation weightage for one slot.

    Stable profiles see no change (C_t = 0): the weightage is min{0, eta_min}
    = 0 and the stable-case evaluation is exactly 0. In development/evolution,
    the weightage follows the rule matching the slot's request level:
    p_min -> max{0, eta_min}; p_avg -> min{eta_min, eta_max} (midpoint with
    the pavg_midpoint flag); p_max -> max{eta_max, eta_max + eta_lp_max}.
    The returned objective is the lower of the stable-case and the
    development/evolution-case evaluations at the chosen weightage.
    """
    eta_min, eta_max, eta_lp_max = bounds
    if not (0 < eta_min <= eta_max) or eta_lp_max < 0:
        raise ControlError(f"invalid weightage bounds {bounds}")
    if profile_state in (ProfileState.STABLE, ProfileState.EMPTY):
        eta = min(0.0, eta_min)
        obj = params.V * (params.C_cost * eta + params.beta * eta)
        return ControlDecision(
            eta=eta,
            objective=obj,
            case=StateCase.STABLE,
            penalty=penalty(params, eta, 0.0),
            case_objective=obj,
        )
    case = request_scenario(params, i_g_t)
    if case is StateCase.DEVEVO_PMIN:
        eta = max(0.0, eta_min)
    elif case is StateCase.DEVEVO_PAVG:
        if params.pavg_midpoint:
            eta = (eta_min + eta_max) / 2.0
        else:
            eta = min(eta_min, eta_max)
    else:
        eta = max(eta_max, eta_max + eta_lp_max)
    p_r = max(i_g_t - params.c_min, 0.0)
    case_obj = devevo_objective(params, eta, i_g_t, p_r)
    stable_obj = 0.0
    return ControlDecision(
        eta=eta,
        objective=min(stable_obj, case_obj),
        case=case,
        penalty=penalty(params, eta, i_g_t),
        case_objective=case_obj,
    )


@dataclass
class PenaltyRun:
    """Per-slot record of a controller run used by the penalty-bound checks."""

    penalties: list[float] = field(default_factory=list)
    bounds_at_t: list[float] = field(default_factory=list)
    queue_values: list[float] = field(default_factory=list)
    r_1: float = 0.0

    @property
    def averages(self) -> list[float]:
        out = []
        total = 0.0
        for t, p in enumerate(self.penalties, start=1):
            total += p
            out.append(total / t)
        return out


def run_penalty_trace(
    params: ControlParams,
    bounds: tuple[float, float, float],
    changes: list[float],
    B: float | None = None,
) -> PenaltyRun:
    """Drive the controller over a sequence of per-slot profile changes.

    A zero change marks a stable slot; positive changes mark development/
    evolution slots. Records the realized penalty and the average-penalty bound at
    every slot.
    """
    if B is None:
        B = compute_B(params.c_max, params.c_min)
    state = QueueState(B=B)
    run = PenaltyRun()
    tracked = False
    for i_g_t in changes:
        if not tracked and i_g_t >= params.c_min:
            run.r_1 = track_request(i_g_t, params.c_min)
            tracked = True
        p_state = ProfileState.STABLE if i_g_t == 0.0 else ProfileState.EVOLUTION
        decision = control_step(state, p_state, i_g_t, bounds, params)
        state = advance_queue(state, i_g_t)
        run.penalties.append(decision.penalty)
        run.queue_values.append(state.R)
        run.bounds_at_t.append(penalty_bound(params, B, run.r_1, state.t))
    return run

"""Energy-attack-aware scheduling policy (EAM).

Per simulation slot the policy makes three coupled decisions:

1. Profile selection.  While an attack is reported, the expected remaining
   attack time picks between the short-attack and long-attack profiles
   (strictly longer than the alpha threshold means long).  Otherwise the
   total stored energy E selects among the energy-driven profiles:
   E > omega1 -> NML, E < omega0 -> CTL, in between -> LP.

2. Task scheduling.  Released tasks whose buffer holds enough usable energy
   to complete them become Ready; the first Ready task in order obtains the
   single MCU and runs to completion (no preemption).  While an attack is
   reported, a task additionally stays Blocked unless the remaining attack
   time strictly exceeds its release period, which suppresses work that could
   not recur within the attack anyway and preserves charge.

3. Federated harvest allocation.  Buffers backing a Ready or Running task
   weigh lambda_hi, the rest lambda_lo; weights are normalised so the shares
   of all buffers sum exactly to the harvested power.

Underfunded tasks are deferred rather than failed: a task only becomes Ready
once its buffer can fund the whole execution while staying at or above v_off,
so aborts are reserved for genuine mid-execution energy collapses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .apps import AppSpec, DataQueue, Profile
from .detector import AttackInfo
from .energy import CapacitorBank


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class PolicyParams:
    """Tunables of the mitigation policy."""

    alpha: float = 60.0  # s, attack-duration split between SA and LA profiles
    omega0: float = 0.0  # J, below this total energy the CTL profile engages
    omega1: float = 0.0  # J, above this total energy the NML profile engages
    lambda_hi: float = 0.8  # harvest weight for buffers backing active work
    lambda_lo: float = 0.2  # harvest weight for idle buffers
    decision_cost: float = 1.781e-9  # J per policy invocation
    decision_time: float = 1.237e-6  # s per policy invocation
    accuracy_gate: bool = False  # require detector accuracy above threshold
    accuracy_threshold: float = 0.5  # minimum trusted detector accuracy
    edf_order: bool = False  # dispatch Ready tasks earliest-deadline-first

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise PolicyError("alpha must be >= 0")
        if not 0 <= self.omega0 <= self.omega1:
            raise PolicyError("need 0 <= omega0 <= omega1")
        if self.lambda_lo < 0 or self.lambda_hi < self.lambda_lo:
            raise PolicyError("need lambda_hi >= lambda_lo >= 0")
        if self.lambda_hi <= 0:
            raise PolicyError("lambda_hi must be positive")
        if self.decision_cost < 0 or self.decision_time < 0:
            raise PolicyError("decision overhead must be >= 0")


def params_for_bank(bank: CapacitorBank, omega0_frac: float = 0.2, omega1_frac: float = 0.6, **kw) -> PolicyParams:
    """PolicyParams with energy thresholds as fractions of bank capacity."""
    from .energy import total_capacity

    cap = total_capacity(bank)
    return PolicyParams(omega0=omega0_frac * cap, omega1=omega1_frac * cap, **kw)


class TaskState(enum.Enum):
    READY = "ready"
    RUNNING = "running"
    BLOCKED = "blocked"
    SUSPENDED = "suspended"


# Observable task-state transitions.  SUSPENDED is entered only from RUNNING
# when an execution aborts on energy failure, and leaves on the next
# scheduling pass once the task is re-classified.
LEGAL_TRANSITIONS = frozenset(
    {
        (TaskState.BLOCKED, TaskState.READY),
        (TaskState.READY, TaskState.BLOCKED),
        (TaskState.READY, TaskState.RUNNING),
        (TaskState.RUNNING, TaskState.BLOCKED),
        (TaskState.RUNNING, TaskState.SUSPENDED),
        (TaskState.SUSPENDED, TaskState.READY),
        (TaskState.SUSPENDED, TaskState.BLOCKED),
    }
)


@dataclass(slots=True)
class SchedulerState:
    """Mutable scheduling state carried across slots."""

    profile: Profile
    active: list[str]  # task ids with a positive rate, in spec order
    rates: dict[str, float]  # per hour, for the active profile
    periods: dict[str, float]  # s, 3600 / rate
    states: dict[str, TaskState]
    pending: dict[str, bool]  # release fired and not yet served
    next_release: dict[str, float]  # s, when the next release fires
    executing: str | None = None
    exec_remaining: float = 0.0  # s of work left on the executing task
    exec_drawn: float = 0.0  # J already withdrawn by the executing task
    # Derived lookup tables, lazily rebuilt whenever the app definition, the
    # active set or the buffer count changes (identity-checked per call).
    _cache_spec: object = field(default=None, repr=False, compare=False)
    _cache_rates: object = field(default=None, repr=False, compare=False)
    _cache_bufs: int = field(default=-1, repr=False, compare=False)
    _task_info: tuple = field(default=(), repr=False, compare=False)
    _active_bufs: tuple = field(default=(), repr=False, compare=False)
    _referenced: tuple = field(default=(), repr=False, compare=False)
    _alloc_memo: tuple | None = field(default=None, repr=False, compare=False)
    _next_fire: float = field(default=-math.inf, repr=False, compare=False)
    _scan_ready: int = field(default=-1, repr=False, compare=False)


class PolicyDecision(NamedTuple):
    """What one policy invocation decided (for logging and accounting)."""

    profile: Profile
    profile_changed: bool
    fired: tuple[str, ...]  # releases that fired this slot
    transitions: tuple[tuple[str, TaskState, TaskState], ...]
    started: str | None  # task dispatched this slot, if any
    weights: tuple[float, ...]  # normalised harvest fractions per buffer
    shares: tuple[float, ...]  # W allotted per buffer
    overhead_drained: float  # J actually taken from buffer 0 for the decision


def select_profile(info: AttackInfo, total: float, params: PolicyParams) -> Profile:
    """Pick the active profile from attack knowledge and stored energy."""
    attack = info.ongoing
    if attack and params.accuracy_gate and not info.accuracy > params.accuracy_threshold:
        attack = False  # detector not trusted; fall back to energy rules
    if attack:
        return Profile.LA if info.remaining > params.alpha else Profile.SA
    if total > params.omega1:
        return Profile.NML
    if total < params.omega0:
        return Profile.CTL
    return Profile.LP


def build_active_set(spec: AppSpec, profile: Profile) -> tuple[list[str], dict[str, float]]:
    """Tasks participating under a profile (rate > 0), with their rates."""
    active: list[str] = []
    rates: dict[str, float] = {}
    for task in spec.tasks:
        rate = float(task.rates.get(profile, 0.0))
        if rate > 0:
            active.append(task.id)
            rates[task.id] = rate
    return active, rates


def init_scheduler(spec: AppSpec, profile: Profile, now: float = 0.0) -> SchedulerState:
    active, rates = build_active_set(spec, profile)
    periods = {tid: 3600.0 / r for tid, r in rates.items()}
    return SchedulerState(
        profile=profile,
        active=active,
        rates=rates,
        periods=periods,
        states={t.id: TaskState.BLOCKED for t in spec.tasks},
        pending={t.id: False for t in spec.tasks},
        next_release={tid: now for tid in active},
    )


def _usable(bank: CapacitorBank, buf: int) -> float:
    """Energy available above the brown-out floor of a buffer."""
    cap = bank.capacitors[buf]
    v = cap.voltage
    v_off = cap.v_off
    return 0.5 * cap.capacitance * (v * v - v_off * v_off)


def _released(state: SchedulerState, spec: AppSpec, queues: dict, task_id: str) -> bool:
    if not state.pending[task_id]:
        return False
    preds = spec.task(task_id).predecessors
    if not preds:
        return True
    return any(queues[(p, task_id)] for p in preds)


def _refresh_cache(state: SchedulerState, spec: AppSpec, num_buffers: int) -> None:
    if (
        state._cache_spec is spec
        and state._cache_rates is state.rates
        and state._cache_bufs == num_buffers
    ):
        return
    state._task_info = tuple(
        (t.id, t.buffer, t.energy_cost, tuple((p, t.id) for p in t.predecessors))
        for t in spec.tasks
    )
    rates = state.rates
    active_bufs = []
    referenced = [0] * num_buffers
    for task in spec.tasks:
        if task.id in rates:
            active_bufs.append((task.id, task.buffer))
            referenced[task.buffer] = 1
    if 1 not in referenced:
        referenced = [1] * num_buffers
    state._active_bufs = tuple(active_bufs)
    state._referenced = tuple(referenced)
    state._alloc_memo = None
    state._cache_spec = spec
    state._cache_rates = rates
    state._cache_bufs = num_buffers


def set_task_states(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    info: AttackInfo,
    queues: dict,
    params: PolicyParams,
) -> list[tuple[str, TaskState, TaskState]]:
    """Re-classify every non-running task; returns the observed transitions."""
    caps = bank.capacitors
    _refresh_cache(state, spec, len(caps))
    transitions: list[tuple[str, TaskState, TaskState]] = []
    n_ready = 0
    states = state.states
    pending = state.pending
    periods = state.periods
    rates = state.rates
    executing = state.executing
    ongoing = info.ongoing
    remaining = info.remaining
    st_ready = TaskState.READY
    st_blocked = TaskState.BLOCKED
    for tid, buf, cost, pred_edges in state._task_info:
        if executing is not None and tid == executing:
            continue
        ready = False
        if tid in rates and pending[tid]:
            released = not pred_edges
            if not released:
                for edge in pred_edges:
                    if queues[edge]:
                        released = True
                        break
            if released:
                cap = caps[buf]
                v = cap.voltage
                v_off = cap.v_off
                usable = 0.5 * cap.capacitance * (v * v - v_off * v_off)
                if ongoing:
                    ready = remaining > periods[tid] and usable > cost
                else:
                    ready = usable >= cost
        target = st_ready if ready else st_blocked
        old = states[tid]
        if old is not target:
            states[tid] = target
            transitions.append((tid, old, target))
        if ready:
            n_ready += 1
    state._scan_ready = n_ready
    return transitions


def pick_execution_task(
    state: SchedulerState, spec: AppSpec, params: PolicyParams
) -> str | None:
    """Dispatch the first Ready task; the MCU runs at most one task."""
    if state.executing is not None:
        return None
    hint = state._scan_ready
    state._scan_ready = -1  # hint is good for one dispatch only
    if hint == 0:
        return None
    order = state.active
    if params.edf_order:
        order = sorted(order, key=lambda tid: (state.next_release.get(tid, 0.0), order.index(tid)))
    for tid in order:
        if state.states[tid] is TaskState.READY:
            state.states[tid] = TaskState.RUNNING
            state.executing = tid
            task = spec.task(tid)
            state.exec_remaining = task.duration
            state.exec_drawn = 0.0
            state.pending[tid] = False
            return tid
    return None


def allocate_harvest(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    power: float,
    params: PolicyParams,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Split the harvested power across buffers by task-state weights.

    Returns (fractions, shares).  Buffers backing at least one Ready or
    Running task weigh lambda_hi, other buffers referenced by the active set
    weigh lambda_lo, and buffers the active set never touches get nothing
    (unless no buffer is referenced at all, in which case every buffer
    weighs lambda_lo).  Shares sum to the harvested power to within one
    float rounding step: the last positive share takes the residual.
    """
    m = len(bank.capacitors)
    _refresh_cache(state, spec, m)
    states = state.states
    st_ready = TaskState.READY
    st_running = TaskState.RUNNING
    hot_mask = 0
    for tid, buf in state._active_bufs:
        st = states[tid]
        if st is st_ready or st is st_running:
            hot_mask |= 1 << buf
    memo = state._alloc_memo
    if (
        memo is not None
        and memo[0] == hot_mask
        and memo[1] == power
        and memo[2] is params
    ):
        return memo[3], memo[4]
    referenced = state._referenced
    hi = params.lambda_hi
    lo = params.lambda_lo
    weights = [0.0] * m
    scale = 0.0
    for i in range(m):
        if referenced[i]:
            w = hi if hot_mask >> i & 1 else lo
            weights[i] = w
            scale += w
    if scale == 0.0:
        # All referenced buffers weigh zero (lambda_lo == 0 and nothing hot):
        # fall back to an even split so the power is not silently dropped.
        weights = [1.0 if referenced[i] else 0.0 for i in range(m)]
        scale = float(sum(weights))
    fractions = tuple(w / scale for w in weights)
    last = -1
    shares = [0.0] * m
    acc = 0.0
    for i in range(m):
        if weights[i] > 0.0:
            last = i
    for i in range(m):
        if weights[i] > 0.0 and i != last:
            s = power * fractions[i]
            shares[i] = s
            acc += s
    residual = power - acc
    shares[last] = residual if residual > 0.0 else 0.0
    shares = tuple(shares)
    state._alloc_memo = (hot_mask, power, params, fractions, shares)
    return fractions, shares


_NO_FIRES: list = []


def fire_releases(state: SchedulerState, now: float) -> list[str]:
    """Mark due releases pending; strictly periodic, no backlog accumulation."""
    if now < state._next_fire:
        return _NO_FIRES
    fired: list[str] = []
    next_release = state.next_release
    for tid in state.active:
        if now >= next_release[tid]:
            state.pending[tid] = True
            fired.append(tid)
            period = state.periods[tid]
            nxt = next_release[tid] + period
            while nxt <= now:
                nxt += period
            next_release[tid] = nxt
    state._next_fire = min(
        (next_release[tid] for tid in state.active), default=math.inf
    )
    return fired


def apply_profile(state: SchedulerState, spec: AppSpec, profile: Profile, now: float) -> None:
    """Switch profiles at a slot boundary, re-phasing release schedules.

    Newly enabled tasks release immediately; tasks staying active keep their
    schedule but never wait longer than one period of the new profile.
    Excluded tasks lose any pending release.
    """
    old_active = set(state.active)
    active, rates = build_active_set(spec, profile)
    periods = {tid: 3600.0 / r for tid, r in rates.items()}
    for tid in active:
        if tid not in old_active:
            state.next_release[tid] = now
        else:
            state.next_release[tid] = min(state.next_release[tid], now + periods[tid])
    for tid in old_active.difference(active):
        state.pending[tid] = False
    state.profile = profile
    state.active = active
    state.rates = rates
    state.periods = periods
    state._next_fire = -math.inf


def policy_step(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    info: AttackInfo,
    queues: dict,
    params: PolicyParams,
    now: float,
    power: float,
    profile_fn=select_profile,
    allocate_fn=allocate_harvest,
) -> PolicyDecision:
    """One complete policy invocation for the current slot.

    Composes profile selection, release firing, task classification, dispatch
    and harvest allocation, and charges the decision cost to buffer 0.  The
    profile_fn/allocate_fn hooks let baseline policies reuse the scheduling
    core with their own profile pinning and allocation rules.
    """
    total = 0.0
    for cap in bank.capacitors:
        total += 0.5 * cap.capacitance * cap.voltage * cap.voltage
    profile = profile_fn(info, total, params)
    changed = profile is not state.profile
    if changed:
        apply_profile(state, spec, profile, now)
    fired = fire_releases(state, now)
    transitions = set_task_states(state, spec, bank, info, queues, params)
    started = pick_execution_task(state, spec, params)
    if started is not None:
        transitions.append((started, TaskState.READY, TaskState.RUNNING))
    weights, shares = allocate_fn(state, spec, bank, power, params)
    cap0 = bank.capacitors[0]
    e0 = 0.5 * cap0.capacitance * cap0.voltage * cap0.voltage
    cost = params.decision_cost
    drained = cost if cost < e0 else e0
    if drained > 0.0:
        cap0.voltage = math.sqrt(2.0 * (e0 - drained) / cap0.capacitance)
    return PolicyDecision(
        profile=profile,
        profile_changed=changed,
        fired=tuple(fired),
        transitions=tuple(transitions),
        started=started,
        weights=weights,
        shares=shares,
        overhead_drained=drained,
    )

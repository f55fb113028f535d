"""Slot-based simulation engine.

Each slot of length dt advances the world in a fixed order:

1. harvested power for the slot is read from the trace, forced to zero
   inside any attack window (the harvester is dead during an attack);
2. the detector is consulted (the mitigation policy sees its report,
   baselines never do);
3. the policy runs: profile selection, release firing, task classification,
   dispatch, harvest allocation, and the per-invocation decision cost;
4. every buffer integrates its allotted share of the harvested power;
5. the running task, if any, withdraws its pro-rata energy for the slot and
   either progresses, completes (publishing its output token), or aborts
   transactionally when its buffer collapses.

The engine keeps an explicit energy ledger (charged, drained, withdrawn,
spilled) so that tests can check conservation, and records every discrete
event plus a per-slot timeline for later analysis.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np

from .apps import AppSpec, DataQueue, Profile, Token, validate
from .baselines import (
    central_allocate_hook,
    central_app,
    central_bank,
    fh_allocate_hook,
    pin_nml,
)
from .detector import NO_ATTACK, AttackInfo, DetectorConfig, detect
from .energy import (
    CapacitorBank,
    capacity_of,
    energy_of,
    total_energy,
    voltage_of,
    withdraw,
)
from .policy import (
    PolicyParams,
    SchedulerState,
    TaskState,
    allocate_harvest,
    init_scheduler,
    policy_step,
    select_profile,
)
from .traces import AttackScenario, EnergyTrace, validate_scenarios

PROFILE_ORDER = (Profile.NML, Profile.LP, Profile.CTL, Profile.SA, Profile.LA)
_PROFILE_INDEX = {p: i for i, p in enumerate(PROFILE_ORDER)}


class EngineError(ValueError):
    pass


@dataclass
class SimConfig:
    """Everything one run needs.  Values are plain SI units."""

    trace: EnergyTrace
    app: AppSpec
    bank: CapacitorBank
    params: PolicyParams
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    attacks: list[AttackScenario] = field(default_factory=list)
    policy: str = "eam"  # eam | fh | central
    dt: float = 1e-3  # s per slot
    horizon: float = 3600.0  # s simulated
    rng_seed: int = 42
    queue_capacity: int = 4
    timeline_stride: int = 1  # record every k-th slot; 0 disables the timeline
    equal_budget: bool = False  # reset buffer energies at first attack onset
    budget_soc: float | None = None  # SOC used by the reset; None keeps initial
    label: str = ""


def validate_config(config: SimConfig) -> list[str]:
    problems: list[str] = []
    if config.policy not in ("eam", "fh", "central"):
        problems.append(f"unknown policy {config.policy!r}")
    if not config.dt > 0:
        problems.append("dt must be positive")
    if config.horizon < config.dt:
        problems.append("horizon must cover at least one slot")
    if config.queue_capacity < 1:
        problems.append("queue capacity must be >= 1")
    if config.timeline_stride < 0:
        problems.append("timeline stride must be >= 0")
    if config.budget_soc is not None and not 0 <= config.budget_soc <= 1:
        problems.append("budget_soc must be in [0, 1]")
    problems.extend(validate(config.app, num_buffers=len(config.bank)))
    try:
        validate_scenarios(config.attacks)
    except ValueError as exc:
        problems.append(str(exc))
    lo, hi = config.trace.span
    n_slots = int(round(config.horizon / config.dt))
    last_t = (n_slots - 1) * config.dt
    if lo > 0 or hi < last_t:
        problems.append(
            f"trace span [{lo}, {hi}] does not cover simulated time [0, {last_t}]"
        )
    return problems


@dataclass
class EventLog:
    """Append-only record of a run plus the sampled timeline.

    Events are (t, kind, *fields) tuples with non-decreasing t.  The totals
    dict carries the engine's raw accumulators (energy ledger, availability
    counts, release bookkeeping) from which metrics are derived.
    """

    events: list[tuple] = field(default_factory=list)
    totals: dict = field(default_factory=dict)
    timeline_t: np.ndarray | None = None
    timeline_v: np.ndarray | None = None
    timeline_profile: np.ndarray | None = None
    timeline_running: np.ndarray | None = None

    def add(self, t: float, kind: str, *fields) -> None:
        self.events.append((t, kind, *fields))

    def of_kind(self, kind: str) -> list[tuple]:
        return [e for e in self.events if e[1] == kind]

    def export_lines(self):
        """Render events as delimited text lines (deterministic)."""
        for ev in self.events:
            parts = [repr(ev[0]), ev[1]]
            for f in ev[2:]:
                if isinstance(f, float):
                    parts.append(repr(f))
                elif isinstance(f, (tuple, list, frozenset, set)):
                    parts.append("+".join(str(x) for x in sorted(f)))
                else:
                    parts.append(str(f))
            yield ",".join(parts)


@dataclass
class MetricsReport:
    """Summary metrics of one run."""

    policy: str
    app_name: str
    horizon: float  # s
    dt: float  # s
    completions: int  # end-to-end pipeline completions at the sink
    app_exec_rate: float  # completions per hour
    post_onset_completions: int  # completions at or after the first attack start
    post_onset_rate: float  # per hour over [first attack start, horizon]
    in_attack_completions: int  # completions inside attack windows
    schedulability: dict  # task id -> served / fired releases
    availability: dict  # component name -> fraction of slots at or above v_on
    availability_latency: dict  # component name -> mean s to recover after attacks
    overhead_invocations: int
    overhead_energy: float  # J, invocations * decision_cost
    overhead_time: float  # s, invocations * decision_time
    aborts: int
    wasted_energy: float  # J withdrawn by executions that later aborted
    spilled_energy: float  # J lost to full buffers
    completions_timeline: list  # (t, cumulative completions)

    def to_rows(self) -> list[tuple[str, str]]:
        rows: list[tuple[str, str]] = [
            ("policy", self.policy),
            ("app", self.app_name),
            ("horizon_s", repr(self.horizon)),
            ("dt_s", repr(self.dt)),
            ("completions", str(self.completions)),
            ("app_exec_rate_per_h", repr(self.app_exec_rate)),
            ("post_onset_completions", str(self.post_onset_completions)),
            ("post_onset_rate_per_h", repr(self.post_onset_rate)),
            ("in_attack_completions", str(self.in_attack_completions)),
        ]
        for tid in sorted(self.schedulability):
            rows.append((f"schedulability.{tid}", repr(self.schedulability[tid])))
        for comp in sorted(self.availability):
            rows.append((f"availability.{comp}", repr(self.availability[comp])))
        for comp in sorted(self.availability_latency):
            rows.append(
                (f"availability_latency_s.{comp}", repr(self.availability_latency[comp]))
            )
        rows += [
            ("overhead_invocations", str(self.overhead_invocations)),
            ("overhead_energy_j", repr(self.overhead_energy)),
            ("overhead_time_s", repr(self.overhead_time)),
            ("aborts", str(self.aborts)),
            ("wasted_energy_j", repr(self.wasted_energy)),
            ("spilled_energy_j", repr(self.spilled_energy)),
        ]
        return rows


_HOOKS = {
    "eam": (select_profile, allocate_harvest, False),
    "fh": (pin_nml, fh_allocate_hook, True),
    "central": (pin_nml, central_allocate_hook, True),
}


@dataclass(slots=True)
class SimState:
    """Full mutable state of a run; step() advances it one slot."""

    config: SimConfig
    app: AppSpec
    bank: CapacitorBank
    params: PolicyParams
    queues: dict
    sched: SchedulerState
    log: EventLog
    powers: list  # W per slot
    n_slots: int
    dt: float
    i: int = 0
    # policy hooks
    profile_fn: object = select_profile
    allocate_fn: object = allocate_harvest
    detector_blind: bool = False
    # detector fast path
    det_windows: list = field(default_factory=list)
    n_windows: int = 0
    wptr: int = 0
    idle_info: AttackInfo = NO_ATTACK
    prev_ongoing: bool = False
    prev_weights: tuple = ()
    # per-buffer constants flattened out of the Capacitor objects; the hot
    # loop touches only cap.voltage beyond these
    cap_half_c: list = field(default_factory=list)  # 0.5 * C
    cap_keep: list = field(default_factory=list)  # 1 - drain_fraction
    cap_sigma: list = field(default_factory=list)  # drain_fraction
    cap_eta: list = field(default_factory=list)  # efficiency
    cap_ceiling: list = field(default_factory=list)  # stored-energy cap, J
    cap_c: list = field(default_factory=list)  # capacitance
    cap_von: list = field(default_factory=list)  # turn-on voltage
    cap_vmax: list = field(default_factory=list)  # rated voltage
    comp_names: tuple = ()  # ((buffer, (component-name, ...)), ...)
    n_components: int = 0
    # latency watches and availability counting
    attack_ends: list = field(default_factory=list)
    aptr: int = 0
    n_attack_ends: int = 0
    watches: list = field(default_factory=list)  # [end, {component: latency|None}]
    avail_counts: list = field(default_factory=list)  # per buffer
    on_energy: list = field(default_factory=list)  # per buffer, E at v_on
    # release bookkeeping
    releases_total: dict = field(default_factory=dict)
    releases_served: dict = field(default_factory=dict)
    window_served: dict = field(default_factory=dict)
    # completions
    completions: list = field(default_factory=list)  # timestamps of sink completions
    payload_seq: int = 0
    # energy ledger
    e_start: float = 0.0
    charged: float = 0.0
    sigma_drain: float = 0.0
    withdrawn: float = 0.0
    decision_drained: float = 0.0
    spilled: float = 0.0
    reset_delta: float = 0.0
    overhead_invocations: int = 0
    aborts: int = 0
    wasted: float = 0.0
    # equal-budget reset
    reset_at: float | None = None
    reset_done: bool = True
    initial_energies: list = field(default_factory=list)
    # timeline buffers
    tl_t: np.ndarray | None = None
    tl_v: np.ndarray | None = None
    tl_profile: np.ndarray | None = None
    tl_running: np.ndarray | None = None
    tl_rows: int = 0
    task_index: dict = field(default_factory=dict)


def _slot_powers(config: SimConfig, n_slots: int) -> list:
    """Per-slot harvested power; attacks silence the harvester outright."""
    t = np.arange(n_slots) * config.dt
    idx = np.searchsorted(config.trace.times, t, side="right") - 1
    v = config.trace.voltages[idx].copy()
    for sc in config.attacks:
        v[(t >= sc.start) & (t < sc.end)] = 0.0
    return (v * v / config.trace.load_resistance).tolist()


def init_sim(config: SimConfig) -> SimState:
    problems = validate_config(config)
    if problems:
        raise EngineError(problems[0])
    app = config.app
    bank = copy.deepcopy(config.bank)  # runs must not mutate the input config
    if config.policy == "central":
        bank = central_bank(bank)
        app = central_app(app)
    profile_fn, allocate_fn, blind = _HOOKS[config.policy]
    n_slots = int(round(config.horizon / config.dt))
    queues = {edge: DataQueue(config.queue_capacity) for edge in app.edges}
    initial_profile = (
        select_profile(NO_ATTACK, total_energy(bank), config.params)
        if config.policy == "eam"
        else Profile.NML
    )
    sched = init_scheduler(app, initial_profile, now=0.0)
    det = config.detector
    det_windows = sorted(
        (sc.start + det.detection_delay, sc.end) for sc in config.attacks
    )
    attacks_by_end = sorted(config.attacks, key=lambda s: s.end)
    stride = config.timeline_stride
    rows = (n_slots + stride - 1) // stride if stride > 0 else 0
    m = len(bank)
    sim = SimState(
        config=config,
        app=app,
        bank=bank,
        params=config.params,
        queues=queues,
        sched=sched,
        log=EventLog(),
        powers=_slot_powers(config, n_slots),
        n_slots=n_slots,
        dt=config.dt,
        profile_fn=profile_fn,
        allocate_fn=allocate_fn,
        detector_blind=blind,
        det_windows=det_windows,
        idle_info=AttackInfo(False, det.reported_accuracy, 0.0, 0.0),
        attack_ends=[sc.end for sc in attacks_by_end],
        avail_counts=[0] * m,
        on_energy=[0.5 * c.capacitance * c.v_on * c.v_on for c in bank.capacitors],
        releases_total={t.id: 0 for t in app.tasks},
        releases_served={t.id: 0 for t in app.tasks},
        window_served={t.id: True for t in app.tasks},
        e_start=total_energy(bank),
        initial_energies=[energy_of(c) for c in bank.capacitors],
        task_index={t.id: k for k, t in enumerate(app.tasks)},
    )
    sim.n_windows = len(det_windows)
    sim.n_attack_ends = len(sim.attack_ends)
    sim.n_components = sum(len(c) for c in bank.component_map.values())
    sim.comp_names = tuple(
        (b, tuple(c.value for c in comps)) for b, comps in bank.component_map.items()
    )
    for c in bank.capacitors:
        sim.cap_half_c.append(0.5 * c.capacitance)
        sim.cap_keep.append(1.0 - c.drain_fraction)
        sim.cap_sigma.append(c.drain_fraction)
        sim.cap_eta.append(c.efficiency)
        sim.cap_ceiling.append(0.5 * c.capacitance * c.v_max * c.v_max)
        sim.cap_c.append(c.capacitance)
        sim.cap_von.append(c.v_on)
        sim.cap_vmax.append(c.v_max)
    if config.equal_budget and config.attacks:
        sim.reset_at = min(sc.start for sc in config.attacks)
        sim.reset_done = False
    if rows:
        sim.tl_t = np.empty(rows)
        sim.tl_v = np.empty((rows, m))
        sim.tl_profile = np.empty(rows, dtype=np.int8)
        sim.tl_running = np.empty(rows, dtype=np.int16)
    sim.log.add(0.0, "init", config.policy, app.name, initial_profile.value)
    return sim


def _complete_task(sim: SimState, tid: str, now: float) -> None:
    """Publish the finishing task's output and settle bookkeeping."""
    app, sched, queues, log = sim.app, sim.sched, sim.queues, sim.log
    task = app.task(tid)
    lineage = {tid}
    for p in task.predecessors:
        q = queues[(p, tid)]
        if q:
            tok = q.pop()
            log.add(now, "pop", p, tid, tok.payload_id)
            lineage |= tok.lineage
    token = Token(sim.payload_seq, now, frozenset(lineage))
    sim.payload_seq += 1
    for succ in app.successors(tid):
        dropped = queues[(tid, succ)].push(token)
        log.add(now, "push", tid, succ, token.payload_id)
        if dropped is not None:
            log.add(now, "drop", tid, succ, dropped.payload_id)
    is_completion = tid == app.sink_task and bool(lineage.intersection(app.sources))
    log.add(now, "finish", tid, int(is_completion), tuple(sorted(lineage)))
    if is_completion:
        sim.completions.append(now)
    if not sim.window_served[tid]:
        sim.window_served[tid] = True
        sim.releases_served[tid] += 1
    sched.states[tid] = TaskState.BLOCKED
    log.add(now, "state", tid, TaskState.RUNNING.value, TaskState.BLOCKED.value)
    sched.executing = None
    sched.exec_remaining = 0.0
    sched.exec_drawn = 0.0


def _abort_task(sim: SimState, tid: str, now: float, reason: str) -> None:
    """Transactional abort: no output, progress lost, task re-released."""
    sched, log = sim.sched, sim.log
    sim.aborts += 1
    sim.wasted += sched.exec_drawn
    log.add(now, "abort", tid, sched.exec_drawn, reason)
    sched.states[tid] = TaskState.SUSPENDED
    log.add(now, "state", tid, TaskState.RUNNING.value, TaskState.SUSPENDED.value)
    sched.pending[tid] = True  # retry once energy permits
    sched.executing = None
    sched.exec_remaining = 0.0
    sched.exec_drawn = 0.0


def step(sim: SimState) -> None:
    """Advance the simulation by one slot."""
    i = sim.i
    if i >= sim.n_slots:
        raise EngineError("simulation already finished")
    dt = sim.dt
    t = i * dt
    log = sim.log
    bank = sim.bank
    caps = bank.capacitors
    sched = sim.sched

    # Equal-budget reset fires at the first slot of the first attack.
    if not sim.reset_done and t >= sim.reset_at:
        for k, cap in enumerate(caps):
            before = energy_of(cap)
            target = (
                sim.initial_energies[k]
                if sim.config.budget_soc is None
                else sim.config.budget_soc * capacity_of(cap)
            )
            cap.voltage = min(voltage_of(target, cap), cap.v_max)
            after = energy_of(cap)
            sim.reset_delta += after - before
        sim.reset_done = True
        log.add(t, "budget_reset", [energy_of(c) for c in caps])

    # (1) harvested power, already zeroed inside attack windows
    power = sim.powers[i]

    # (2) detector report (baselines are blind by construction)
    wptr = sim.wptr
    windows = sim.det_windows
    n_win = sim.n_windows
    while wptr < n_win and t >= windows[wptr][1]:
        wptr += 1
        sim.wptr = wptr
    if wptr < n_win and t >= windows[wptr][0]:
        true_info = detect(t, sim.config.attacks, sim.config.detector)
    else:
        true_info = sim.idle_info
    if true_info.ongoing != sim.prev_ongoing:
        log.add(t, "attack_seen", "begin" if true_info.ongoing else "end")
        sim.prev_ongoing = true_info.ongoing
    info = sim.idle_info if sim.detector_blind else true_info

    # (3) policy invocation
    rec = policy_step(
        sched,
        sim.app,
        bank,
        info,
        sim.queues,
        sim.params,
        t,
        power,
        sim.profile_fn,
        sim.allocate_fn,
    )
    sim.overhead_invocations += 1
    sim.decision_drained += rec.overhead_drained
    if rec.profile_changed:
        log.add(t, "profile", rec.profile.value)
    if rec.weights != sim.prev_weights:
        sim.prev_weights = rec.weights
        log.add(t, "alloc", *rec.weights)
    if rec.fired:
        for tid in rec.fired:
            sim.releases_total[tid] += 1
            sim.window_served[tid] = False
            log.add(t, "release", tid)
    if rec.transitions:
        for tid, old, new in rec.transitions:
            log.add(t, "state", tid, old.value, new.value)
    if rec.started is not None:
        task = sim.app.task(rec.started)
        log.add(
            t,
            "start",
            rec.started,
            energy_of(caps[task.buffer]),
            task.energy_cost,
        )

    # (4) buffers integrate their shares (arithmetic mirrors buffer_step
    # expression-for-expression so the two stay bit-identical)
    shares = rec.shares
    half_c = sim.cap_half_c
    keep = sim.cap_keep
    sigma = sim.cap_sigma
    eta = sim.cap_eta
    ceilings = sim.cap_ceiling
    cap_c = sim.cap_c
    vmaxes = sim.cap_vmax
    charged = sim.charged
    sigma_drain = sim.sigma_drain
    spilled = sim.spilled
    for b, cap in enumerate(caps):
        v = cap.voltage
        e_before = half_c[b] * v * v
        gain = eta[b] * shares[b] * dt
        raw = keep[b] * e_before + gain
        charged += gain
        sigma_drain += sigma[b] * e_before
        ceiling = ceilings[b]
        if raw > ceiling:
            spilled += raw - ceiling
            raw = ceiling
        nv = math.sqrt(2.0 * raw / cap_c[b])
        vmax = vmaxes[b]
        cap.voltage = nv if nv < vmax else vmax
    sim.charged = charged
    sim.sigma_drain = sigma_drain
    sim.spilled = spilled

    # (5) the running task draws its slice of energy
    tid = sched.executing
    if tid is not None:
        task = sim.app.task(tid)
        cap = caps[task.buffer]
        if cap.voltage < cap.v_off:
            _abort_task(sim, tid, t, "brownout")
        else:
            remaining = sched.exec_remaining
            draw = task.energy_cost * (dt if dt < remaining else remaining) / task.duration
            if withdraw(cap, draw):
                sim.withdrawn += draw
                sched.exec_drawn += draw
                remaining -= dt
                sched.exec_remaining = remaining
                if remaining <= 1e-12:
                    _complete_task(sim, tid, t)
            else:
                _abort_task(sim, tid, t, "withdrawal")

    # availability accounting and post-attack recovery watches
    von = sim.cap_von
    avail = sim.avail_counts
    for b, cap in enumerate(caps):
        if cap.voltage >= von[b]:
            avail[b] += 1
    if sim.aptr < sim.n_attack_ends:
        while sim.aptr < sim.n_attack_ends and t >= sim.attack_ends[sim.aptr]:
            sim.watches.append([sim.attack_ends[sim.aptr], {}])
            sim.aptr += 1
    if sim.watches:
        done = []
        for watch in sim.watches:
            end, seen = watch
            for b, names in sim.comp_names:
                if caps[b].voltage >= von[b]:
                    for name in names:
                        if name not in seen:
                            seen[name] = t - end
            if len(seen) == sim.n_components:
                log.add(t, "recovered", end)
                done.append(watch)
        for watch in done:
            sim.watches.remove(watch)
            sim.log.totals.setdefault("latency_records", []).append(watch)

    # timeline sampling
    stride = sim.config.timeline_stride
    if stride > 0 and i % stride == 0:
        r = sim.tl_rows
        sim.tl_t[r] = t
        for b, cap in enumerate(caps):
            sim.tl_v[r, b] = cap.voltage
        sim.tl_profile[r] = _PROFILE_INDEX[sched.profile]
        sim.tl_running[r] = sim.task_index[tid] if tid is not None else -1
        sim.tl_rows = r + 1

    sim.i = i + 1


def _finalize(sim: SimState) -> tuple[MetricsReport, EventLog]:
    config = sim.config
    records = sim.log.totals.setdefault("latency_records", [])
    # Close out recovery watches that never completed before the horizon.
    for end, seen in sim.watches:
        for comps in sim.bank.component_map.values():
            for comp in comps:
                seen.setdefault(comp.value, config.horizon - end)
        records.append([end, seen])
    sim.watches = []
    log = sim.log
    log.totals.update(
        {
            "e_start": sim.e_start,
            "e_end": total_energy(sim.bank),
            "charged": sim.charged,
            "sigma_drain": sim.sigma_drain,
            "withdrawn": sim.withdrawn,
            "decision_drained": sim.decision_drained,
            "spilled": sim.spilled,
            "reset_delta": sim.reset_delta,
            "completions": list(sim.completions),
            "releases_total": dict(sim.releases_total),
            "releases_served": dict(sim.releases_served),
            "avail_counts": list(sim.avail_counts),
            "component_buffers": {
                comp.value: b
                for b, comps in sim.bank.component_map.items()
                for comp in comps
            },
            "n_slots": sim.n_slots,
            "overhead_invocations": sim.overhead_invocations,
            "aborts": sim.aborts,
            "wasted": sim.wasted,
        }
    )
    if sim.tl_t is not None:
        rows = sim.tl_rows
        log.timeline_t = sim.tl_t[:rows]
        log.timeline_v = sim.tl_v[:rows]
        log.timeline_profile = sim.tl_profile[:rows]
        log.timeline_running = sim.tl_running[:rows]
    return compute_metrics(log, config), log


def run(config: SimConfig) -> tuple[MetricsReport, EventLog]:
    """Simulate the whole horizon and return (metrics, event log)."""
    sim = init_sim(config)
    n = sim.n_slots
    while sim.i < n:
        step(sim)
    return _finalize(sim)


def compute_metrics(log: EventLog, config: SimConfig) -> MetricsReport:
    """Assemble the metrics report from a finished run's log."""
    totals = log.totals
    if "n_slots" not in totals:
        raise EngineError("log has no run totals; finish a run first")
    horizon_h = config.horizon / 3600.0
    completions = totals["completions"]
    schedulability = {
        tid: (
            totals["releases_served"][tid] / totals["releases_total"][tid]
            if totals["releases_total"][tid]
            else 1.0
        )
        for tid in totals["releases_total"]
    }
    availability = {
        comp: totals["avail_counts"][b] / totals["n_slots"]
        for comp, b in totals["component_buffers"].items()
    }
    latency: dict[str, float] = {}
    for comp in totals["component_buffers"]:
        vals = [seen[comp] for _, seen in totals["latency_records"] if comp in seen]
        latency[comp] = sum(vals) / len(vals) if vals else float("nan")
    first_attack = min((sc.start for sc in config.attacks), default=None)
    if first_attack is not None:
        post = [ts for ts in completions if ts >= first_attack]
        post_hours = (config.horizon - first_attack) / 3600.0
        post_rate = len(post) / post_hours if post_hours > 0 else float("nan")
    else:
        post, post_rate = [], float("nan")
    in_attack = sum(
        1 for ts in completions for sc in config.attacks if sc.start <= ts < sc.end
    )
    invocations = totals["overhead_invocations"]
    return MetricsReport(
        policy=config.policy,
        app_name=config.app.name,
        horizon=config.horizon,
        dt=config.dt,
        completions=len(completions),
        app_exec_rate=len(completions) / horizon_h,
        post_onset_completions=len(post),
        post_onset_rate=post_rate,
        in_attack_completions=in_attack,
        schedulability=schedulability,
        availability=availability,
        availability_latency=latency,
        overhead_invocations=invocations,
        overhead_energy=invocations * config.params.decision_cost,
        overhead_time=invocations * config.params.decision_time,
        aborts=totals["aborts"],
        wasted_energy=totals["wasted"],
        spilled_energy=totals["spilled"],
        completions_timeline=[(ts, k + 1) for k, ts in enumerate(completions)],
    )

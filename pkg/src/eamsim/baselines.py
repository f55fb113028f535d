"""Baseline policies: fixed-share harvesting (FH) and a central capacitor.

Both baselines run the same release/dispatch scheduler as the mitigation
policy but pinned to the normal profile, and neither ever consults the attack
detector; they only differ in how energy storage is organised:

* FH keeps the federated bank and splits harvested power across buffers in
  fixed proportion to their capacitance, regardless of what tasks need.

* Central replaces the bank with a single capacitor holding the summed
  capacitance; every task and hardware component hangs off that one buffer.

Both pay the same per-slot decision cost as the mitigation policy so that
scheduling overhead never favours one side.
"""

from __future__ import annotations

import dataclasses

from .apps import AppSpec, Profile
from .detector import AttackInfo
from .energy import Capacitor, CapacitorBank, Component, total_energy, voltage_of
from .policy import PolicyDecision, PolicyParams, SchedulerState, policy_step

POLICY_NAMES = ("eam", "fh", "central")


def pin_nml(info: AttackInfo, total: float, params: PolicyParams) -> Profile:
    """Baselines have no profile machinery; they always run NML."""
    return Profile.NML


def fh_capacity_fractions(bank: CapacitorBank) -> tuple[float, ...]:
    total = sum(c.capacitance for c in bank.capacitors)
    return tuple(c.capacitance / total for c in bank.capacitors)


def fh_allocate(bank: CapacitorBank, harvested_power: float) -> tuple[float, ...]:
    """Time-invariant allocation: share_i = C_i / sum(C_j) * P.

    The last share takes the residual so the split sums to the harvested
    power to within one float rounding step.
    """
    if harvested_power < 0:
        raise ValueError("harvested power must be >= 0")
    fractions = fh_capacity_fractions(bank)
    shares = [0.0] * len(fractions)
    acc = 0.0
    for i in range(len(fractions) - 1):
        shares[i] = harvested_power * fractions[i]
        acc += shares[i]
    shares[-1] = max(harvested_power - acc, 0.0)
    return tuple(shares)


def fh_allocate_hook(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    power: float,
    params: PolicyParams,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return fh_capacity_fractions(bank), fh_allocate(bank, power)


def central_allocate_hook(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    power: float,
    params: PolicyParams,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return (1.0,), (power,)


def central_bank(bank: CapacitorBank) -> CapacitorBank:
    """Merge a federated bank into one capacitor of the summed capacitance.

    Threshold voltages, efficiency and drain are taken from the first buffer;
    the merged buffer starts with the bank's total stored energy (capped at
    the merged capacity).  Every hardware component maps to the single buffer.
    """
    first = bank.capacitors[0]
    merged_c = sum(c.capacitance for c in bank.capacitors)
    merged = Capacitor(
        capacitance=merged_c,
        parallel_resistance=first.parallel_resistance,
        efficiency=first.efficiency,
        drain_fraction=first.drain_fraction,
        v_on=first.v_on,
        v_off=first.v_off,
        v_max=first.v_max,
    )
    merged.voltage = min(voltage_of(total_energy(bank), merged), merged.v_max)
    components = tuple(Component)
    return CapacitorBank(capacitors=[merged], component_map={0: components})


def central_app(spec: AppSpec) -> AppSpec:
    """Clone an application with every task drawing from buffer 0."""
    tasks = tuple(dataclasses.replace(t, buffer=0) for t in spec.tasks)
    return AppSpec(name=spec.name, tasks=tasks, sink_task=spec.sink_task)


def rts_schedule(
    state: SchedulerState,
    spec: AppSpec,
    bank: CapacitorBank,
    queues: dict,
    params: PolicyParams,
    now: float,
    power: float,
    allocate_fn,
) -> PolicyDecision:
    """Baseline scheduling step: NML pinned, detector never consulted."""
    from .detector import NO_ATTACK

    return policy_step(
        state,
        spec,
        bank,
        NO_ATTACK,
        queues,
        params,
        now,
        power,
        profile_fn=pin_nml,
        allocate_fn=allocate_fn,
    )

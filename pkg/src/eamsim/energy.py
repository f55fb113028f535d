"""Capacitor-bank energy model for federated storage.

Each energy buffer is a capacitor charged by a harvester through a parallel
resistance R_p.  Two complementary views of the same hardware are used:

* Continuous charging curve, for a capacitor held at constant input power P
  starting from voltage V0:

      V(dt) = sqrt(P * R_p - exp(-2 * dt / (C * R_p)) * (P * R_p - V0^2))

  The curve saturates at sqrt(P * R_p); with P = 0 it reduces to the familiar
  RC decay V0 * exp(-dt / (C * R_p)).

* Discrete per-slot bookkeeping used by the simulation loop.  With stored
  energy E, per-slot drain fraction sigma, charging efficiency eta and an
  allotted input power P over a slot of length t:

      E' = (1 - sigma) * E + eta * P * t

  capped at the capacity 0.5 * C * v_max^2.  Energy and voltage are linked by
  E = 0.5 * C * V^2 throughout.

Withdrawals model task execution: energy may only be taken if the buffer
stays at or above the power-off threshold v_off afterwards, otherwise nothing
is deducted and the caller must treat the draw as failed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class EnergyModelError(ValueError):
    """Invalid parameter or argument in the energy model."""


class Component(enum.Enum):
    """Hardware components a buffer can power (for availability accounting)."""

    MCU = "mcu"
    SENSING = "sensing"
    ACTUATION = "actuation"


@dataclass(slots=True)
class Capacitor:
    """One energy buffer with its charging characteristics and thresholds."""

    capacitance: float  # F
    parallel_resistance: float = 30e3  # ohm, harvester-side parallel resistance
    efficiency: float = 0.9  # fraction of allotted input energy actually stored
    drain_fraction: float = 0.001  # fraction of stored energy lost per slot
    v_on: float = 2.4  # V, device powers on at or above this
    v_off: float = 1.8  # V, device browns out below this
    v_max: float = 3.0  # V, hard ceiling enforced by the charger
    voltage: float = 0.0  # V, current charge level

    def __post_init__(self) -> None:
        if not self.capacitance > 0:
            raise EnergyModelError("capacitance must be positive")
        if not self.parallel_resistance > 0:
            raise EnergyModelError("parallel resistance must be positive")
        if not 0 < self.efficiency <= 1:
            raise EnergyModelError("efficiency must be in (0, 1]")
        if not 0 <= self.drain_fraction < 1:
            raise EnergyModelError("drain fraction must be in [0, 1)")
        if not 0 <= self.v_off < self.v_on <= self.v_max:
            raise EnergyModelError("need 0 <= v_off < v_on <= v_max")
        if not 0 <= self.voltage <= self.v_max:
            raise EnergyModelError("voltage must lie in [0, v_max]")


def energy_of(cap: Capacitor) -> float:
    """Stored energy 0.5 * C * V^2 in joules."""
    return 0.5 * cap.capacitance * cap.voltage * cap.voltage


def voltage_of(energy: float, cap: Capacitor) -> float:
    """Voltage corresponding to a stored energy on this capacitor."""
    if energy < 0:
        raise EnergyModelError("energy must be non-negative")
    return math.sqrt(2.0 * energy / cap.capacitance)


def energy_at(cap: Capacitor, volts: float) -> float:
    """Energy stored at a given voltage level (e.g. the v_on threshold)."""
    return 0.5 * cap.capacitance * volts * volts


def capacity_of(cap: Capacitor) -> float:
    """Maximum storable energy, at v_max."""
    return energy_at(cap, cap.v_max)


def charge_voltage(cap: Capacitor, power: float, dt: float) -> float:
    """Voltage after charging at constant input power for dt seconds.

    Pure function of the capacitor's current voltage; the capacitor is not
    modified.  The result is clamped to [0, v_max].
    """
    if power < 0:
        raise EnergyModelError("power must be non-negative")
    if dt < 0:
        raise EnergyModelError("dt must be non-negative")
    pr = power * cap.parallel_resistance
    decay = math.exp(-2.0 * dt / (cap.capacitance * cap.parallel_resistance))
    v_sq = pr - decay * (pr - cap.voltage * cap.voltage)
    v = math.sqrt(max(v_sq, 0.0))
    return min(max(v, 0.0), cap.v_max)


def buffer_step(cap: Capacitor, allotted_power: float, dt: float) -> float:
    """Advance the buffer one simulation slot and return the new energy.

    Applies the per-slot update E' = (1 - sigma) * E + eta * P * t, caps the
    result at capacity, and keeps the capacitor's voltage consistent with the
    stored energy.
    """
    if allotted_power < 0:
        raise EnergyModelError("allotted power must be non-negative")
    if not dt > 0:
        raise EnergyModelError("dt must be positive")
    energy = (1.0 - cap.drain_fraction) * energy_of(cap) + cap.efficiency * allotted_power * dt
    ceiling = capacity_of(cap)
    if energy > ceiling:
        energy = ceiling
    cap.voltage = min(voltage_of(energy, cap), cap.v_max)
    return energy


def withdraw(cap: Capacitor, amount: float) -> bool:
    """Take energy out of the buffer if it can stay at or above v_off.

    Returns True and deducts the energy when the post-withdrawal voltage is
    still >= v_off; otherwise deducts nothing and returns False.
    """
    if amount < 0:
        raise EnergyModelError("withdrawal amount must be non-negative")
    if amount == 0.0:
        return True
    remaining = energy_of(cap) - amount
    if remaining < energy_at(cap, cap.v_off):
        return False
    cap.voltage = voltage_of(remaining, cap)
    return True


@dataclass
class CapacitorBank:
    """Ordered collection of buffers plus what hardware each one powers."""

    capacitors: list[Capacitor]
    component_map: dict[int, tuple[Component, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.capacitors:
            raise EnergyModelError("bank needs at least one capacitor")
        for idx in self.component_map:
            if not 0 <= idx < len(self.capacitors):
                raise EnergyModelError(f"component map references missing buffer {idx}")

    def __len__(self) -> int:
        return len(self.capacitors)

    def buffer_for(self, component: Component) -> int:
        for idx, comps in self.component_map.items():
            if component in comps:
                return idx
        raise EnergyModelError(f"no buffer powers {component}")


def total_energy(bank: CapacitorBank) -> float:
    """Aggregate stored energy across all buffers (sum convention)."""
    return sum(energy_of(c) for c in bank.capacitors)


def total_capacity(bank: CapacitorBank) -> float:
    return sum(capacity_of(c) for c in bank.capacitors)


def default_bank(initial_soc: float = 1.0) -> CapacitorBank:
    """Two-buffer reference bank: 33 uF for MCU+sensing, 220 uF for actuation.

    initial_soc is the starting energy as a fraction of capacity, applied to
    every buffer.
    """
    if not 0 <= initial_soc <= 1:
        raise EnergyModelError("initial_soc must be in [0, 1]")
    caps = [Capacitor(capacitance=33e-6), Capacitor(capacitance=220e-6)]
    for cap in caps:
        cap.voltage = cap.v_max * math.sqrt(initial_soc)
    return CapacitorBank(
        capacitors=caps,
        component_map={
            0: (Component.MCU, Component.SENSING),
            1: (Component.ACTUATION,),
        },
    )

"""Harvester voltage traces and energy-attack injection.

A trace is a time series of open-circuit voltage measurements taken across a
known load resistor.  The instantaneous harvesting power seen by the device is
recovered as P = V^2 / R_load.  Between samples the voltage is held constant
(zero-order hold), which matches how the traces were recorded: each sample is
the measured level until the next reading.

An energy attack is a window of time during which the harvester produces no
energy at all.  Injecting an attack into a trace zeroes every sample inside
the window.  To keep the zero-order-hold reconstruction exact for windows that
do not line up with the sampling grid, injection also inserts a zero sample at
the window start and restores the pre-attack level at the window end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ATTACK_KINDS = ("short", "long")


class TraceError(ValueError):
    """Malformed trace data or an out-of-span query."""


@dataclass(frozen=True)
class EnergyTrace:
    """Voltage-over-time record of a harvesting source.

    Immutable once constructed; operations that transform a trace return a
    new instance.  The sample arrays are locked against in-place writes.
    """

    times: np.ndarray  # s, strictly increasing
    voltages: np.ndarray  # V, >= 0
    load_resistance: float  # ohm, resistor the voltage was measured across
    name: str = "trace"

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        volts = np.asarray(self.voltages, dtype=float)
        if times.ndim != 1 or volts.ndim != 1 or times.size != volts.size:
            raise TraceError("times and voltages must be 1-D arrays of equal length")
        if times.size == 0:
            raise TraceError("trace must contain at least one sample")
        if np.any(np.diff(times) <= 0):
            raise TraceError("sample times must be strictly increasing")
        if np.any(volts < 0):
            raise TraceError("voltages must be non-negative")
        if not self.load_resistance > 0:
            raise TraceError("load resistance must be positive")
        times.flags.writeable = False
        volts.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "voltages", volts)

    @property
    def span(self) -> tuple[float, float]:
        """(first, last) sample time in seconds."""
        return float(self.times[0]), float(self.times[-1])

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.voltages.tolist()))

    def voltage_at(self, t: float) -> float:
        """Zero-order-hold voltage at time t (must lie within the span)."""
        lo, hi = self.span
        if t < lo or t > hi:
            raise TraceError(f"t={t} outside trace span [{lo}, {hi}]")
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(self.voltages[idx])


@dataclass(frozen=True)
class AttackScenario:
    """One energy-attack window: the harvester is dead for its duration."""

    start: float  # s, window begin (inclusive)
    duration: float  # s, window length; end = start + duration (exclusive)
    kind: str = "short"  # informational label, one of ATTACK_KINDS
    id: str = "attack"

    def __post_init__(self) -> None:
        if self.start < 0:
            raise TraceError("attack start must be >= 0")
        if not self.duration > 0:
            raise TraceError("attack duration must be positive")
        if self.kind not in ATTACK_KINDS:
            raise TraceError(f"attack kind must be one of {ATTACK_KINDS}")

    @property
    def end(self) -> float:
        return self.start + self.duration


def validate_scenarios(scenarios: list[AttackScenario]) -> None:
    """Reject overlapping attack windows (a run expects disjoint attacks)."""
    ordered = sorted(scenarios, key=lambda s: s.start)
    for a, b in zip(ordered, ordered[1:]):
        if b.start < a.end:
            raise TraceError(f"attack windows {a.id!r} and {b.id!r} overlap")


def load_trace(path, load_resistance: float, name: str | None = None) -> EnergyTrace:
    """Read a two-column (time_s, voltage_v) delimited text file.

    Lines starting with '#' are comments.  A single non-numeric header line is
    tolerated.  Columns may be separated by commas or whitespace.
    """
    times: list[float] = []
    volts: list[float] = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise TraceError(f"cannot read trace file {path}: {exc}") from exc
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 2:
            raise TraceError(f"{path}:{lineno}: expected two columns, got {len(fields)}")
        try:
            t, v = float(fields[0]), float(fields[1])
        except ValueError:
            if not header_seen and not times:
                header_seen = True
                continue
            raise TraceError(f"{path}:{lineno}: cannot parse {line!r}") from None
        times.append(t)
        volts.append(v)
    if not times:
        raise TraceError(f"{path}: no samples found")
    trace_name = name if name is not None else str(path)
    return EnergyTrace(np.array(times), np.array(volts), load_resistance, trace_name)


def synthesize_trace(
    kind: str,
    amplitude: float,
    length: float,
    interval: float,
    period: float | None = None,
    load_resistance: float = 30e3,
    name: str | None = None,
) -> EnergyTrace:
    """Generate a synthetic voltage trace.

    kinds:
      constant  -- amplitude everywhere
      sinusoid  -- rectified sine, V(t) = A * |sin(2*pi*t / period)|
      step      -- 0 V for the first half of the trace, amplitude after

    Samples are laid on a regular grid of the given interval; the trace has
    ceil(length / interval) + 1 samples so both endpoints are covered.
    """
    if amplitude < 0:
        raise TraceError("amplitude must be non-negative")
    if not length > 0 or not interval > 0:
        raise TraceError("length and interval must be positive")
    n = math.ceil(length / interval) + 1
    times = np.arange(n) * interval
    if kind == "constant":
        volts = np.full(n, float(amplitude))
    elif kind == "sinusoid":
        if period is None or not period > 0:
            raise TraceError("sinusoid needs a positive period")
        volts = amplitude * np.abs(np.sin(2.0 * np.pi * times / period))
    elif kind == "step":
        volts = np.where(times >= length / 2.0, float(amplitude), 0.0)
    else:
        raise TraceError(f"unknown trace kind {kind!r}")
    return EnergyTrace(times, volts, load_resistance, name or kind)


def inject_attack(trace: EnergyTrace, scenario: AttackScenario) -> EnergyTrace:
    """Return a copy of the trace with the attack window zeroed.

    All samples with start <= t < end drop to 0 V.  Where the window edges
    fall between samples, boundary samples are inserted so the zero-order-hold
    reconstruction is exactly zero inside the window and untouched outside.
    The input trace is not modified; injection is idempotent.
    """
    lo, hi = trace.span
    start, end = scenario.start, scenario.end
    if start > hi or end <= lo:
        raise TraceError(
            f"attack window [{start}, {end}) does not intersect trace span [{lo}, {hi}]"
        )
    times = trace.times.copy()
    volts = trace.voltages.copy()
    # Boundary sample at the window start so the hold drops to zero exactly there.
    if start > lo and start not in times:
        i = int(np.searchsorted(times, start))
        times = np.insert(times, i, start)
        volts = np.insert(volts, i, 0.0)
    # Boundary sample at the window end restores the pre-attack hold level.
    if end <= hi and end not in times:
        level = trace.voltage_at(end)
        i = int(np.searchsorted(times, end))
        times = np.insert(times, i, end)
        volts = np.insert(volts, i, level)
    mask = (times >= start) & (times < end)
    volts[mask] = 0.0
    return EnergyTrace(times, volts, trace.load_resistance, trace.name)


def power_from_voltage(trace: EnergyTrace, t: float) -> float:
    """Harvested power P = V(t)^2 / R_load in watts at time t."""
    v = trace.voltage_at(t)
    return v * v / trace.load_resistance

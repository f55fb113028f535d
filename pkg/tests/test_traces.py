"""Voltage traces: synthesis, file I/O, attack injection."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eamsim.traces import (
    ATTACK_KINDS,
    AttackScenario,
    EnergyTrace,
    TraceError,
    inject_attack,
    load_trace,
    power_from_voltage,
    synthesize_trace,
    validate_scenarios,
)


# ---------------------------------------------------------------- synthesis


def test_synthesize_constant():
    tr = synthesize_trace("constant", 2.5, length=10.0, interval=1.0)
    assert tr.times.tolist() == list(range(11))  # both endpoints covered
    assert np.all(tr.voltages == 2.5)
    assert tr.span == (0.0, 10.0)
    assert tr.name == "constant"
    assert tr.load_resistance == 30e3


def test_synthesize_sinusoid():
    tr = synthesize_trace("sinusoid", 2.0, length=900.0, interval=1.0, period=900.0)
    v = dict(zip(tr.times.tolist(), tr.voltages.tolist()))
    assert v[0.0] == 0.0
    assert v[225.0] == pytest.approx(2.0, abs=1e-12)  # quarter period peak
    assert v[450.0] == pytest.approx(0.0, abs=1e-12)  # rectified zero
    assert v[675.0] == pytest.approx(2.0, abs=1e-12)  # |sin| second lobe
    assert np.all(tr.voltages >= 0.0)
    assert tr.voltages.max() <= 2.0 + 1e-12


def test_synthesize_step():
    tr = synthesize_trace("step", 1.5, length=100.0, interval=10.0)
    first, second = tr.voltages[tr.times < 50.0], tr.voltages[tr.times >= 50.0]
    assert np.all(first == 0.0)
    assert np.all(second == 1.5)


@pytest.mark.parametrize(
    "kw,msg",
    [
        (dict(kind="triangle", amplitude=1.0, length=1.0, interval=0.1), "unknown"),
        (dict(kind="constant", amplitude=-1.0, length=1.0, interval=0.1), "amplitude"),
        (dict(kind="constant", amplitude=1.0, length=0.0, interval=0.1), "positive"),
        (dict(kind="constant", amplitude=1.0, length=1.0, interval=0.0), "positive"),
        (dict(kind="sinusoid", amplitude=1.0, length=1.0, interval=0.1, period=None), "period"),
    ],
)
def test_synthesize_rejects(kw, msg):
    with pytest.raises(TraceError, match=msg):
        synthesize_trace(**kw)


# ------------------------------------------------------------- trace object


def test_trace_validation():
    with pytest.raises(TraceError):
        EnergyTrace(np.array([0.0, 1.0, 1.0]), np.array([1.0, 1.0, 1.0]), 30e3)
    with pytest.raises(TraceError):
        EnergyTrace(np.array([0.0, 1.0]), np.array([1.0, -0.1]), 30e3)
    with pytest.raises(TraceError):
        EnergyTrace(np.array([]), np.array([]), 30e3)
    with pytest.raises(TraceError):
        EnergyTrace(np.array([0.0, 1.0]), np.array([1.0]), 30e3)
    with pytest.raises(TraceError):
        EnergyTrace(np.array([0.0]), np.array([1.0]), 0.0)


def test_trace_is_immutable():
    tr = synthesize_trace("constant", 1.0, length=5.0, interval=1.0)
    with pytest.raises(ValueError):
        tr.voltages[0] = 2.0


def test_voltage_at_zero_order_hold():
    tr = EnergyTrace(np.array([0.0, 10.0, 20.0]), np.array([1.0, 2.0, 3.0]), 30e3)
    assert tr.voltage_at(0.0) == 1.0
    assert tr.voltage_at(9.999) == 1.0  # holds the previous sample
    assert tr.voltage_at(10.0) == 2.0
    assert tr.voltage_at(20.0) == 3.0
    with pytest.raises(TraceError):
        tr.voltage_at(-0.1)
    with pytest.raises(TraceError):
        tr.voltage_at(20.1)
    assert tr.samples == [(0.0, 1.0), (10.0, 2.0), (20.0, 3.0)]


def test_power_from_voltage():
    tr = synthesize_trace("constant", 3.0, length=5.0, interval=1.0, load_resistance=30e3)
    assert power_from_voltage(tr, 2.5) == 9.0 / 30e3


# ------------------------------------------------------------ attack window


def test_attack_scenario_basics():
    sc = AttackScenario(start=10.0, duration=5.0, kind="short", id="w")
    assert sc.end == 15.0
    assert set(ATTACK_KINDS) == {"short", "long"}
    with pytest.raises(TraceError):
        AttackScenario(start=-1.0, duration=5.0)
    with pytest.raises(TraceError):
        AttackScenario(start=0.0, duration=0.0)
    with pytest.raises(TraceError):
        AttackScenario(start=0.0, duration=5.0, kind="medium")


def test_validate_scenarios_overlap():
    a = AttackScenario(start=0.0, duration=10.0)
    b = AttackScenario(start=5.0, duration=10.0, id="b")
    c = AttackScenario(start=10.0, duration=10.0, id="c")
    with pytest.raises(TraceError, match="overlap"):
        validate_scenarios([a, b])
    validate_scenarios([a, c])  # touching windows are fine
    validate_scenarios([c, a])  # order in the list does not matter


# ----------------------------------------------------------------- file I/O


def test_load_trace_tolerant_format(tmp_path):
    p = tmp_path / "trace.csv"
    p.write_text(
        "# a comment\n"
        "time_s,voltage_v\n"  # single header line is tolerated
        "0.0,1.0\n"
        "1.0 2.0\n"  # whitespace separator also accepted
        "\n"
        "2.5,0.5\n"
    )
    tr = load_trace(p, load_resistance=10e3, name="bench")
    assert tr.samples == [(0.0, 1.0), (1.0, 2.0), (2.5, 0.5)]
    assert tr.name == "bench"
    assert tr.load_resistance == 10e3


def test_load_trace_errors(tmp_path):
    with pytest.raises(TraceError, match="cannot read"):
        load_trace(tmp_path / "missing.csv", load_resistance=30e3)
    bad = tmp_path / "bad.csv"
    bad.write_text("0.0,1.0,2.0\n")
    with pytest.raises(TraceError, match="two columns"):
        load_trace(bad, load_resistance=30e3)
    empty = tmp_path / "empty.csv"
    empty.write_text("# nothing\n")
    with pytest.raises(TraceError, match="no samples"):
        load_trace(empty, load_resistance=30e3)


# ---------------------------------------------------------------- injection


def test_inject_attack_zeroes_window_and_keeps_rest():
    tr = synthesize_trace("constant", 2.0, length=100.0, interval=10.0)
    sc = AttackScenario(start=25.0, duration=30.0)  # [25, 55), off-grid edges
    out = inject_attack(tr, sc)
    assert np.all(tr.voltages == 2.0)  # input untouched
    assert 25.0 in out.times and 55.0 in out.times  # boundary samples added
    for t in (25.0, 30.0, 54.999):
        assert out.voltage_at(t) == 0.0
    for t in (0.0, 24.999, 55.0, 100.0):
        assert out.voltage_at(t) == 2.0


def test_inject_attack_idempotent():
    tr = synthesize_trace("sinusoid", 2.0, length=60.0, interval=1.0, period=30.0)
    sc = AttackScenario(start=10.5, duration=20.0)
    once = inject_attack(tr, sc)
    twice = inject_attack(once, sc)
    assert np.array_equal(once.times, twice.times)
    assert np.array_equal(once.voltages, twice.voltages)


def test_inject_attack_outside_span():
    tr = synthesize_trace("constant", 2.0, length=10.0, interval=1.0)
    with pytest.raises(TraceError, match="does not intersect"):
        inject_attack(tr, AttackScenario(start=100.0, duration=5.0))


@given(st.floats(min_value=0.0, max_value=99.9))
def test_inject_attack_power_is_zero_inside(t):
    tr = synthesize_trace("constant", 2.0, length=100.0, interval=7.0)
    out = inject_attack(tr, AttackScenario(start=33.0, duration=41.0))
    inside = 33.0 <= t < 74.0
    if inside:
        assert power_from_voltage(out, t) == 0.0
    else:
        assert power_from_voltage(out, t) == power_from_voltage(tr, t)

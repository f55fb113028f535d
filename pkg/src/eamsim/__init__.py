"""Trace-driven simulator for energy-attack mitigation on intermittent devices."""

from .apps import AppSpec, DataQueue, Profile, TaskSpec, Token, builtin_app, validate
from .detector import NO_ATTACK, AttackInfo, DetectorConfig, detect
from .energy import (
    Capacitor,
    CapacitorBank,
    Component,
    buffer_step,
    charge_voltage,
    default_bank,
    withdraw,
)
from .engine import (
    EventLog,
    MetricsReport,
    SimConfig,
    compute_metrics,
    init_sim,
    run,
    step,
)
from .policy import (
    PolicyDecision,
    PolicyParams,
    SchedulerState,
    TaskState,
    allocate_harvest,
    init_scheduler,
    params_for_bank,
    policy_step,
    select_profile,
)
from .traces import AttackScenario, EnergyTrace, inject_attack, load_trace, synthesize_trace

__all__ = [
    "AppSpec",
    "AttackInfo",
    "AttackScenario",
    "Capacitor",
    "CapacitorBank",
    "Component",
    "DataQueue",
    "DetectorConfig",
    "EnergyTrace",
    "EventLog",
    "MetricsReport",
    "NO_ATTACK",
    "PolicyDecision",
    "PolicyParams",
    "Profile",
    "SchedulerState",
    "SimConfig",
    "TaskSpec",
    "TaskState",
    "Token",
    "allocate_harvest",
    "buffer_step",
    "builtin_app",
    "charge_voltage",
    "compute_metrics",
    "default_bank",
    "detect",
    "init_scheduler",
    "init_sim",
    "inject_attack",
    "load_trace",
    "params_for_bank",
    "policy_step",
    "run",
    "select_profile",
    "step",
    "synthesize_trace",
    "validate",
    "withdraw",
]

__version__ = "0.1.0"

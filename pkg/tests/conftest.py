"""Shared pytest/hypothesis setup."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "sim",
    deadline=None,  # single shared CPU; wall-clock deadlines only cause flakes
    max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,  # keep the suite deterministic run-to-run
)
settings.load_profile("sim")

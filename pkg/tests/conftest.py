from hypothesis import HealthCheck, settings

# property tests share the process with JIT warm-up; wall-clock deadlines
# would only add flakiness
settings.register_profile(
    "latticehydro",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("latticehydro")

import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


import time  # noqa: E402

import pytest  # noqa: E402

from struvelab.identities import REGISTRY, grid_for, run_identity  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def default_runs():
    """identity id -> list of (params, reports, seconds) over the default grids."""
    out = {}
    for iid in REGISTRY:
        rows = []
        for params in grid_for(iid, "default"):
            t0 = time.perf_counter()
            reports = run_identity(iid, params)
            rows.append((params, reports, time.perf_counter() - t0))
        out[iid] = rows
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import time

import pytest

from convoy_orbit.scenario import BUNDLED, parse_scenario
from convoy_orbit.simulation import run_simulation

ACCEPTANCE_RESULTS = []


def record(criterion, check, passed, detail=""):
    ACCEPTANCE_RESULTS.append((criterion, check, bool(passed), detail))


@pytest.fixture
def report():
    return record


class _Runs:
    """Bundled scenarios run once per session, with wall-clock timing."""

    def __init__(self):
        self._cache = {}

    def __call__(self, name):
        if name not in self._cache:
            cfg = parse_scenario(name)
            t0 = time.perf_counter()
            trace = run_simulation(cfg)
            self._cache[name] = (trace, time.perf_counter() - t0)
        return self._cache[name]


@pytest.fixture(scope="session")
def paper_runs():
    return _Runs()


@pytest.fixture(scope="session")
def bundled_names():
    return BUNDLED


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion, check, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        tr.write_line(f"[{status}] criterion {criterion}: {check}" + (f" ({detail})" if detail else ""))

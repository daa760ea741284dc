import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from bac.ontology import default_catalog

settings.register_profile("fast", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fast")

FIXTURES = Path(__file__).parent / "fixtures"
SUITE_BUDGET_S = 10.0

_criteria: dict[int, tuple[str, bool]] = {}
_started = [0.0]


def pytest_sessionstart(session):
    _started[0] = time.perf_counter()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    ok = report.passed and _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, ok)


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _started[0]
    ok = elapsed < SUITE_BUDGET_S
    _criteria[8] = (f"full suite under {SUITE_BUDGET_S:.0f} s (took {elapsed:.2f} s)", ok)
    if not ok and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}")


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def flight_dir():
    return FIXTURES / "flight"

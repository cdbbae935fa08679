from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from contcalc.stdlib import build_prelude

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def prelude():
    return build_prelude()


@pytest.fixture(scope="session")
def P(prelude):
    return prelude.program


# -- acceptance criteria report --------------------------------------------

_criteria: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): test belongs to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _criteria.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        verdict = "PASS" if all(_criteria[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}")

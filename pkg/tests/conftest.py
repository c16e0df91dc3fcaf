from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from fixlab.order import FinitePoset, OmegaPlusOne, PowersetLattice

settings.register_profile(
    "fixlab", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("fixlab")


@pytest.fixture
def b2() -> PowersetLattice:
    return PowersetLattice(["p", "q"])


@pytest.fixture
def two_chain() -> FinitePoset:
    return FinitePoset.chain(2)


@pytest.fixture
def three_chain() -> FinitePoset:
    return FinitePoset([0, 1, 2], [(0, 1), (1, 2)], closure=True)


@pytest.fixture
def vee() -> FinitePoset:
    """Bottom with two incomparable tops; chain-complete but not a lattice."""
    return FinitePoset(["o", "l", "r"], [("o", "l"), ("o", "r")], closure=True)


@pytest.fixture
def antichain() -> FinitePoset:
    return FinitePoset.discrete(["a", "b"])


@pytest.fixture
def omega1() -> OmegaPlusOne:
    return OmegaPlusOne()


# -- acceptance report ----------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[n] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, title = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}  {verdict}  {title}")

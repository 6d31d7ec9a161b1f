import pytest

from cictools.lgroup import descriptors_up_to
from cictools.poset import SpectralPoset

GRID = descriptors_up_to(max_components=3, max_rank=3)

_acceptance_results = {}


@pytest.fixture
def chain():
    return SpectralPoset(["c0", "c1", "c2"], [("c0", "c1"), ("c1", "c2")])


@pytest.fixture
def ytree():
    return SpectralPoset(["r", "m", "a", "b"], [("r", "m"), ("m", "a"), ("m", "b")])


@pytest.fixture
def diamond():
    return SpectralPoset(["r", "p", "q", "m"], [("r", "p"), ("r", "q"), ("p", "m"), ("q", "m")])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    passed = report.passed and _acceptance_results.get(number, True)
    _acceptance_results[number] = passed
    _acceptance_results.setdefault("titles", {})[number] = title


def pytest_terminal_summary(terminalreporter):
    titles = _acceptance_results.get("titles")
    if not titles:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(titles):
        status = "PASS" if _acceptance_results[number] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {titles[number]}")

from __future__ import annotations

import pytest

ACCEPTANCE_FILE = "test_acceptance.py"

_titles: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if item.nodeid.split("::")[0].endswith(ACCEPTANCE_FILE):
            doc = (item.obj.__doc__ or item.name).strip().splitlines()[0]
            _titles[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.nodeid not in _titles:
        return
    if report.when == "call" or report.failed:
        if _outcomes.get(report.nodeid) != "FAIL":
            _outcomes[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, title in _titles.items():
        outcome = _outcomes.get(nodeid, "NOT RUN")
        terminalreporter.write_line(f"{outcome:<7} {title}")


@pytest.fixture(scope="session")
def all_cases():
    from movcone import enumerate_cases

    return enumerate_cases()


@pytest.fixture(scope="session")
def cones(all_cases):
    from movcone import build_movable

    return {pair.case_id: build_movable(pair) for pair in all_cases}

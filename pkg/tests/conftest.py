"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

import pytest

_OUTCOMES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    failed = report.failed or (report.when == "setup" and report.outcome != "passed")
    if report.when == "call" or failed:
        prev = _OUTCOMES.get(item.nodeid, (label, "PASS"))[1]
        state = "FAIL" if failed or prev == "FAIL" else "PASS"
        _OUTCOMES[item.nodeid] = (label, state)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label, state in sorted(_OUTCOMES.values(), key=lambda v: v[0]):
        terminalreporter.write_line(f"{state}  {label}")

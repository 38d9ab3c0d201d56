"""Collects one pass/fail line per acceptance criterion and prints them at the end of the run."""

import pytest
from hypothesis import settings

settings.register_profile("exact", deadline=None, max_examples=60)
settings.load_profile("exact")

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, tolerance): acceptance criterion")
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker and (call.when == "call" or (call.when == "setup" and not report.passed)):
        number, title, tolerance = marker.args
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        item.config.stash[_CRITERIA][number] = (report.passed, title, tolerance, detail)
    return report


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_CRITERIA]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        passed, title, tolerance, detail = results[number]
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'} [{tolerance}] {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)

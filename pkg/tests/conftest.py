import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_criteria: dict[str, tuple[str, bool]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    number, name = m.groups()
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _criteria.get(number, (name, True))[1]
        _criteria[number] = (name, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        name, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number} {name.replace('_', ' ')}: {'PASS' if ok else 'FAIL'}")

"""Per-criterion pass/fail summary for the acceptance suite.

Tests in ``test_acceptance.py`` carry ``@pytest.mark.criterion(n, "title")``.
After the run, one line per criterion is printed: PASS only if every test
tagged with it passed.
"""

from collections import defaultdict

import pytest
from hypothesis import settings

# fixed examples keep the suite reproducible and its runtime predictable
settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")

_titles: dict[int, str] = {}
_nodes: dict[str, int] = {}
_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            n, title = mark.args
            _titles[n] = title
            _nodes[item.nodeid] = n


def pytest_runtest_logreport(report):
    n = _nodes.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.failed:
        _outcomes[n].append(report.passed)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_titles):
        results = _outcomes.get(n, [])
        ok = bool(results) and all(results)
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {n:>2}: {status}  ({sum(results)}/{len(results)} tests)  {_titles[n]}"
        )

import re

import pytest


def pytest_addoption(parser):
    parser.addoption("--run-very-slow", action="store_true", default=False,
                     help="also run solver checks that may take hours")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-very-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-very-slow")
    for item in items:
        if "very_slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    rank = {"PASS": 0, "SKIPPED": 1, "FAIL": 2, "ERROR": 3}
    rows = {}
    for status in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", getattr(rep, "nodeid", ""))
            if m and (rep.when == "call" or status in ("skipped", "error")):
                k = int(m.group(1))
                label = {"passed": "PASS", "failed": "FAIL"}.get(status, status.upper())
                if rank[label] >= rank[rows.get(k, "PASS")]:
                    rows[k] = label
    if rows:
        terminalreporter.section("acceptance criteria")
        for k in sorted(rows):
            terminalreporter.write_line(f"criterion {k:2d}: {rows[k]}")

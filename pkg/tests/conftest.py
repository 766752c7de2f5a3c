from __future__ import annotations

import pytest

from negokit.domain import EngineConfig
from negokit.scenarios import (
    distributive_campsite,
    integrative_campsite,
    research_allocation_scenario,
)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of each run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and "::" in nodeid:
                rows.append((nodeid.split("::")[-1], status))
    if not rows:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, status in sorted(set(rows)):
        mark = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {label.removeprefix('test_')}")


@pytest.fixture(scope="session")
def integrative():
    return integrative_campsite()


@pytest.fixture(scope="session")
def distributive():
    return distributive_campsite()


@pytest.fixture(scope="session")
def extended():
    return research_allocation_scenario()


@pytest.fixture(scope="session")
def config():
    return EngineConfig()

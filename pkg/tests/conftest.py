import os

import pytest

from padic_zeros.fpsearch import warm_up

# The sweep kernel is compiled once per session; forked workers inherit it.
warm_up()


@pytest.fixture
def workers_env(monkeypatch):
    monkeypatch.delenv("PADIC_ZEROS_WORKERS", raising=False)
    return os.environ


# Acceptance lines, collected by tests/test_acceptance.py and repeated at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

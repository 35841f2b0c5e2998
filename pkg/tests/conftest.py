from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from specmon.fixtures import load_fixture
from specmon.pieces import compute_piece_table, default_strategy

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.cache
def fixture(name: str):
    return load_fixture(name)


@functools.cache
def strategy(name: str):
    return default_strategy(fixture(name))


@functools.cache
def table(name: str):
    return compute_piece_table(fixture(name).presentation, strategy(name))


@pytest.fixture
def bicyclic():
    return fixture("bicyclic")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion; printed at the end of the run."""
    def record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

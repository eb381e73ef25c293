import math

import numpy as np
import pytest

from opexp.checks import canonical_counterexample

ACCEPTANCE_LINES: list[str] = []

PI = math.pi


@pytest.fixture
def canonical():
    return canonical_counterexample()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def record_acceptance(label: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

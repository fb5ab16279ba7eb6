import numpy as np
import pytest

from snapshot_probe.qubit import QubitState


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def plus():
    return QubitState.plus()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

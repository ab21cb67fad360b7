import numpy as np
import pytest

from bayes_outcome import Dataset, SimConfig, simulate_dataset


@pytest.fixture
def tiny():
    """Two points per class in d=3; the hand-worked example."""
    return Dataset(
        [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 4.0, 0.0]],
        [0, 0, 1, 1],
    )


@pytest.fixture(scope="session")
def reference_d10():
    return simulate_dataset(SimConfig(d=10, seed=11))


@pytest.fixture(scope="session")
def reference_d100():
    return simulate_dataset(SimConfig(d=100, seed=12))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from murraycoat import Grid, Params, build_spectral_operator, steady_state

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fig1():
    return Params.fig1()


@pytest.fixture(scope="session")
def grid26():
    return Grid(26, 26, 25.0, 25.0)


@pytest.fixture(scope="session")
def sop26(grid26, fig1):
    return build_spectral_operator(grid26, fig1)


@pytest.fixture(scope="session")
def equilibrium(fig1):
    return steady_state(fig1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from msforecast import SimSetup, gen_setup


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture(scope="session")
def mixed_series():
    return gen_setup(SimSetup("mixed", 1000, seed=11)).series


@pytest.fixture(scope="session")
def trig_double_series():
    return gen_setup(SimSetup("trig-double", 1000, seed=3)).series


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])

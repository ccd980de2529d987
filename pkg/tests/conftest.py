import pytest

from prosumer_sim.core import BatterySpec
from prosumer_sim.synthetic import synthetic_generation, synthetic_load


@pytest.fixture(scope="session")
def load_series():
    return synthetic_load(annual_kwh=1950.0, seed=3)


@pytest.fixture(scope="session")
def gen_series():
    return synthetic_generation(annual_kwh_per_kwp=1600.0, seed=4)


@pytest.fixture
def b1():
    return BatterySpec(3.3, 3.0, name="B1")


# Acceptance verdicts collected by tests/test_acceptance.py, printed after the run.
ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(line[1])

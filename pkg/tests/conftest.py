import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "orlicz",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("orlicz")


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on its own."""
    def record(number, passed, detail):
        line = f"CRITERION {number} {'PASS' if passed else 'FAIL'} {detail}"
        CRITERIA[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[number])

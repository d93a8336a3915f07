import numpy as np
import pytest
from hypothesis import settings

from wmetric import Domain, Weight

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# filled by the acceptance tests, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def disk():
    return Domain.unit_disk()


@pytest.fixture
def half_plane():
    return Domain.half_plane()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def sqrt_weight(disk):
    return Weight.dist_power(disk, -0.5)

import numpy as np
import pytest
from hypothesis import settings

from nehari_shape.forms import ProblemSpec
from nehari_shape.quadrature import QuadratureRule
from nehari_shape.spectral import ground_state, lambda1

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def eigen_setup(a, panels=4, order=12):
    rule = QuadratureRule(a, panels, panels, order)
    return ProblemSpec.eigenvalue(ground_state(a), lambda1(a)), rule


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def le_solution():
    from nehari_shape.oracle import lane_emden_ground_state
    return lane_emden_ground_state(4.0, 1.0, 65, 65)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)

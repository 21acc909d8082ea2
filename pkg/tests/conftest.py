from fractions import Fraction as F

import pytest

from excursion_ot.excursion import TransportPlan
from excursion_ot.measure import Measure

HALF = F(1, 2)


@pytest.fixture
def ex1():
    """Two atoms moving right: mu = (d0 + d5)/2, nu = (d4 + d9)/2."""
    return Measure(atoms=[(0, HALF), (5, HALF)]), Measure(atoms=[(4, HALF), (9, HALF)])


@pytest.fixture
def pi_short():
    """Two short arches 0->4 and 5->9."""
    return TransportPlan([(0, 4, HALF), (5, 9, HALF)])


@pytest.fixture
def pi_nested():
    """Long arch 0->9 over the backward arch 5->4."""
    return TransportPlan([(0, 9, HALF), (5, 4, HALF)])


@pytest.fixture
def shift_pair():
    """mu = (d0 + d1)/2, nu = (d1 + d2)/2: cost matrix [[1, 2], [0, 1]] at p = 1."""
    return Measure(atoms=[(0, HALF), (1, HALF)]), Measure(atoms=[(1, HALF), (2, HALF)])


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

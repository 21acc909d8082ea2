import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from excursion_ot.excursion import TransportPlan, excursion_coupling
from excursion_ot.instances import random_atomic_pair, random_mixed_pair
from excursion_ot.measure import Measure
from excursion_ot.monotone import check_pair, check_plan
from excursion_ot.solve import solve_secondary

HALF = F(1, 2)


@pytest.mark.parametrize(
    "r1, r2, expected",
    [
        ((0, 4), (5, 9), (True, True, True)),
        ((0, 9), (5, 4), (True, True, False)),
        ((0, 1), (1, 2), (True, False, True)),
        ((0, 2), (1, 3), (False, True, True)),
        ((0, 4), (9, 4), (True, True, True)),
        ((0, 9), (4, 5), (True, True, True)),  # nested, same way
        ((3, 3), (3, 5), (True, True, True)),  # degenerate route never connects
        ((0, 4), (4, 0), (True, False, True)),  # same interval, not strictly nested
        ((0, 6), (6, 3), (True, False, True)),  # touch at 6 but connect
    ],
)
def test_check_pair(r1, r2, expected):
    assert tuple(check_pair(r1, r2)) == expected
    assert tuple(check_pair(r2, r1)) == expected


small = st.integers(-5, 5)
routes = st.tuples(small, small)


@given(routes, routes)
def test_check_pair_symmetric(r1, r2):
    assert check_pair(r1, r2) == check_pair(r2, r1)


@given(small, routes)
def test_degenerate_routes_never_connect(x, r):
    assert check_pair((x, x), r).non_connecting


def test_plan_verdicts(ex1, pi_short, pi_nested):
    assert check_plan(excursion_coupling(*ex1)).clean
    v = check_plan(pi_nested)
    assert v.orientation_violations == [((0, 9), (5, 4))]
    assert not v.crossing_violations and not v.connection_violations
    v = check_plan(TransportPlan([(0, 1, HALF), (1, 2, HALF)]))
    assert v.connection_violations and v.summary() == "violations"


def test_curve_plans_are_sampled():
    v = check_plan(excursion_coupling(Measure.uniform(0, 1), Measure.uniform(1, 2)))
    assert v.clean and v.sampled and v.summary() == "clean (sampled)"
    # two sliding pieces that cross each other
    crossing = TransportPlan(curves=[(0, 1, (1, 0), (1, 2)), (1, 2, (1, 0), (1, 2))])
    assert not check_plan(crossing).clean


@pytest.mark.parametrize("seed", range(60))
def test_excursion_is_monotone(seed):
    rng = random.Random(seed)
    mu, nu = random_mixed_pair(rng) if seed % 3 == 0 else random_atomic_pair(rng)
    assert check_plan(excursion_coupling(mu, nu)).clean


@pytest.mark.parametrize("seed", range(30))
def test_secondary_is_monotone(seed):
    mu, nu = random_atomic_pair(random.Random(seed))
    for q in (0.3, 0.5, 0.9):
        assert check_plan(solve_secondary(mu, nu, q).plan).clean

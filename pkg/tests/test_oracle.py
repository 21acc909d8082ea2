import random
from fractions import Fraction as F

import pytest

from excursion_ot.errors import DomainError, OracleAmbiguityError
from excursion_ot.excursion import TransportPlan, excursion_coupling
from excursion_ot.instances import random_atomic_pair
from excursion_ot.measure import Measure
from excursion_ot.oracle import (
    brute_force_lexico,
    brute_force_lp,
    enumerate_vertices,
    enumerate_vertices_by_trees,
)
from excursion_ot.plan import CostSpec, marginals

HALF = F(1, 2)


def test_vertex_counts(ex1, shift_pair):
    assert len(enumerate_vertices(*ex1)) == 2
    assert len(enumerate_vertices(*shift_pair)) == 2
    assert len(enumerate_vertices(Measure.dirac(0), Measure.dirac(1))) == 1
    # uniform 3x3 with equal weights: the 6 permutation matrices
    m = Measure(atoms=[(k, 1) for k in range(3)])
    assert len(enumerate_vertices(m, m)) == 6


@pytest.mark.parametrize("seed", range(25))
def test_peeling_matches_spanning_trees(seed):
    mu, nu = random_atomic_pair(random.Random(seed), max_atoms=3)
    assert enumerate_vertices(mu, nu) == enumerate_vertices_by_trees(mu, nu)


@pytest.mark.parametrize("seed", range(10))
def test_vertices_are_feasible(seed):
    mu, nu = random_atomic_pair(random.Random(seed))
    for v in enumerate_vertices(mu, nu):
        assert marginals(v) == (mu, nu)
        assert len(v.routes) <= len(mu.atoms) + len(nu.atoms) - 1


def test_size_cap():
    big = Measure(atoms=[(k, 1) for k in range(6)])
    with pytest.raises(DomainError):
        enumerate_vertices(big, big)


def test_lp_oracle_examples(ex1, pi_short, pi_nested):
    assert brute_force_lp(*ex1, CostSpec(0.5)) == {pi_short, pi_nested}
    assert brute_force_lp(*ex1, CostSpec(1)) == {pi_short}
    assert brute_force_lp(Measure.dirac(0), Measure.dirac(1), CostSpec(0.5)) == {TransportPlan([(0, 1, 1)])}


def test_lexico_examples(ex1, pi_short, shift_pair):
    assert brute_force_lexico(*shift_pair, 0.5) == TransportPlan([(1, 1, HALF), (0, 2, HALF)])
    for q in (0.2, 0.7):
        assert brute_force_lexico(*ex1, q) == pi_short
    assert brute_force_lexico(Measure.dirac(0), Measure.dirac(1), 0.5) == TransportPlan([(0, 1, 1)])


def test_lexico_ambiguity():
    # both vertices are T_1 optimal (cost 20); at q = 1e-12 their T_q values,
    # 2 * 10**q and 9**q + 11**q, differ by about 1e-11, inside the tie tolerance
    mu = Measure(atoms=[(0, 1), (1, 1)])
    nu = Measure(atoms=[(10, 1), (11, 1)])
    assert len(brute_force_lp(mu, nu, CostSpec(1))) == 2
    with pytest.raises(OracleAmbiguityError):
        brute_force_lexico(mu, nu, 1e-12)
    assert brute_force_lexico(mu, nu, 0.5) == excursion_coupling(mu, nu)

"""Acceptance criteria, each at its stated tolerance, instance count and time budget.

Run with ``pytest tests/test_acceptance.py`` (one PASS/FAIL line per criterion
in the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import random
import time
from fractions import Fraction as F

import pytest

from excursion_ot.excursion import TransportPlan, excursion_coupling, plan_of_random_description
from excursion_ot.instances import random_atomic_pair, random_mixed_pair, random_separated_pair
from excursion_ot.measure import Measure, cdf_at, cdf_left_at, common_mass_split, discretize
from excursion_ot.monotone import check_plan
from excursion_ot.oracle import brute_force_lexico, enumerate_vertices
from excursion_ot.plan import ZERO_COST, CostSpec, antitone_coupling, cost, plan_distance
from excursion_ot.signed_graph import build_sigma, indicatrix, indicatrix_integrals, total_variation_parts
from excursion_ot.solve import solve_lp, solve_secondary, sweep_p

HALF = F(1, 2)
MU1 = Measure(atoms=[(0, HALF), (5, HALF)])
NU1 = Measure(atoms=[(4, HALF), (9, HALF)])
SHORT = TransportPlan([(0, 4, HALF), (5, 9, HALF)])
NESTED = TransportPlan([(0, 9, HALF), (5, 4, HALF)])


def _timed(fn):
    t = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t


def criterion_1():
    vertices = enumerate_vertices(MU1, NU1)
    c = CostSpec(0.5)
    worst = max(abs(cost(v, c) - 2) for v in vertices)
    # the segment between the two vertices is the whole polytope here
    mixes = [TransportPlan(SHORT.scaled(lam).routes + NESTED.scaled(1 - lam).routes) for lam in (F(1, 3), HALF)]
    worst = max([worst] + [abs(cost(p, c) - 2) for p in mixes])
    return len(vertices) == 2 and worst <= 1e-12, f"{len(vertices)} vertices, max |T - 2| = {worst:.1e}"


def criterion_2():
    # nested arches are cheaper exactly when (9**p + 1)/2 < 4**p, i.e. below p = 1/2
    want = {0.2: NESTED, 0.4: NESTED, 0.6: SHORT, 0.8: SHORT, 0.99: SHORT}
    got = {p: solve_lp(MU1, NU1, CostSpec(p)).plan for p in want}
    bad = [p for p in want if got[p] != want[p]]
    return not bad, f"mismatches at p in {bad}" if bad else "nested for p < 1/2, short arches above"


SCHEDULE = [1 - 2.0**-k for k in range(1, 13)]


def criterion_3(count=500):
    rng = random.Random(20240603)
    lexico_bad, sweep_bad = 0, 0
    for _ in range(count):
        mu, nu = random_atomic_pair(rng)
        exc = excursion_coupling(mu, nu)
        lexico_bad += any(brute_force_lexico(mu, nu, q) != exc for q in (0.3, 0.5, 0.9))
        sweep_bad += sweep_p(mu, nu, SCHEDULE).final_plan != exc
    return lexico_bad == 0 and sweep_bad == 0, (
        f"{count} instances: lexicographic mismatches {lexico_bad}, sweep mismatches {sweep_bad}"
    )


INJECTED = {
    "crossing": TransportPlan([(0, 2, HALF), (1, 3, HALF)]),
    "connection": TransportPlan([(0, 1, HALF), (1, 2, HALF)]),
    "orientation": TransportPlan([(0, 9, HALF), (5, 4, HALF)]),
}


def criterion_4(count=500):
    rng = random.Random(20240603)
    dirty = sum(not check_plan(excursion_coupling(*random_atomic_pair(rng))).clean for _ in range(count))
    wrong = []
    for kind, plan in INJECTED.items():
        v = check_plan(plan)
        found = {
            "crossing": bool(v.crossing_violations),
            "connection": bool(v.connection_violations),
            "orientation": bool(v.orientation_violations),
        }
        if found != {k: k == kind for k in found}:
            wrong.append(kind)
    return dirty == 0 and not wrong, f"{count} excursion plans, {dirty} flagged; misclassified patterns: {wrong}"


def _identities(mu, nu):
    split = common_mass_split(mu, nu)
    f = build_sigma(split)
    prof = indicatrix(f)
    pts = [None] + list(f.points) + [None]
    for s in pts[:-1]:
        for t in pts[1:]:
            if s is not None and t is not None and s >= t:
                continue
            up, down = indicatrix_integrals(prof, s, t)
            tv = total_variation_parts(f, s, t)[0]
            fs = 0 if s is None else f(s)
            ft = 0 if t is None else f(t)
            if tv != up + down or ft - fs != up - down:
                return False
            if split.mu0.mass_between(s, t) != up or split.nu0.mass_between(s, t) != down:
                return False
    desc = plan_of_random_description(mu, nu)
    return split.mu0.is_zero or desc.theta_half_total == 1


def criterion_5(count=200):
    rng = random.Random(20240603)
    bad = 0
    for k in range(count):
        mu, nu = random_mixed_pair(rng) if k % 2 else random_atomic_pair(rng)
        bad += not _identities(mu, nu)
    return bad == 0, f"{count} instances, {bad} with a failed identity"


def _half_variation(mu, nu):
    # atomic measures: |mu - nu| is the sum of the CDF jump differences
    pts = {a.x for a in mu.atoms} | {b.x for b in nu.atoms}
    jumps = [(cdf_at(mu, x) - cdf_left_at(mu, x)) - (cdf_at(nu, x) - cdf_left_at(nu, x)) for x in pts]
    return sum((abs(j) for j in jumps), F(0)) / 2


def criterion_6(count=100):
    rng = random.Random(20240603)
    bad = 0
    for _ in range(count):
        mu, nu = random_atomic_pair(rng)
        bad += solve_lp(mu, nu, ZERO_COST).value != _half_variation(mu, nu)
    return bad == 0, f"{count} instances, {bad} mismatches"


def criterion_7(count=50):
    rng = random.Random(20240603)
    bad = sum(excursion_coupling(mu, nu) != antitone_coupling(mu, nu)
              for mu, nu in (random_separated_pair(rng) for _ in range(count)))
    return bad == 0, f"{count} instances, {bad} mismatches"


def criterion_8():
    mu, nu = Measure.uniform(0, 1), Measure.uniform(1, 2)
    plan = excursion_coupling(mu, nu)
    shape = (
        not plan.routes
        and len(plan.curves) == 1
        and (plan.curves[0].h0, plan.curves[0].h1) == (0, 1)
        and plan.curves[0].x(F(1, 3)) == F(1, 3)
        and plan.curves[0].y(F(1, 3)) == F(5, 3)
    )
    err = max(abs(cost(plan, CostSpec(q)) - 2**q / (q + 1)) for q in (0.1, 0.3, 0.5, 0.9))
    dists = []
    for n in (8, 16, 32):
        r = solve_secondary(discretize(mu, n), discretize(nu, n), 0.5)
        dists.append(plan_distance(r.plan, plan))
    decreasing = all(b < a for a, b in zip(dists, dists[1:]))
    return shape and err <= 1e-9 and decreasing, (
        f"single curve {shape}, max quadrature error {err:.1e}, distances {[round(d, 6) for d in dists]}"
    )


CRITERIA = [
    (1, "equal cost 2 at p = 1/2 on every vertex", criterion_1, 1.0),
    (2, "phase transition at p = 1/2", criterion_2, 1.0),
    (3, "lexicographic oracle and p -> 1 sweep equal the excursion coupling", criterion_3, 300.0),
    (4, "arch monotonicity and injected violations", criterion_4, 30.0),
    (5, "indicatrix identities", criterion_5, 30.0),
    (6, "zero-cost value is half the variation", criterion_6, 10.0),
    (7, "separated supports give the decreasing rearrangement", criterion_7, 10.0),
    (8, "continuous shift: curve, closed form, discretized convergence", criterion_8, 30.0),
]


def _line(num, name, ok, detail, secs, budget):
    status = "PASS" if ok and secs < budget else "FAIL"
    return f"[{status}] criterion {num}: {name} ({detail}; {secs:.2f}s of {budget:.0f}s)"


@pytest.mark.parametrize("num, name, fn, budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, budget, acceptance_log):
    ok, detail, secs = _timed(fn)
    line = _line(num, name, ok, detail, secs, budget)
    acceptance_log.append(line)
    print(line)
    assert ok, detail
    assert secs < budget, f"took {secs:.2f}s, budget {budget}s"


if __name__ == "__main__":
    for num, name, fn, budget in CRITERIA:
        ok, detail, secs = _timed(fn)
        print(_line(num, name, ok, detail, secs, budget))

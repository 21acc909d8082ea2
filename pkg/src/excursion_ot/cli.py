"""Command-line entry point ``excursion-ot``.

Exit status: 0 on success, 2 on bad input (domain errors), 3 on internal
invariant failures.  Errors are printed to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io as _io
import json
import os
import random
import sys
from pathlib import Path

from . import io
from .errors import DomainError, InvariantError
from .excursion import TransportPlan, excursion_coupling
from .instances import random_atomic_pair
from .measure import Measure, common_mass_split, discretize
from .monotone import check_plan
from .oracle import brute_force_lexico, brute_force_lp
from .plan import CostSpec, ZERO_COST, antitone_coupling, cost, plan_distance, quantile_coupling
from .signed_graph import build_sigma, indicatrix
from .solve import solve_lp, solve_secondary, sweep_p

COMMANDS = ("excursion", "solve", "secondary", "sweep", "check-monotone", "indicatrix", "oracle", "compare")
MAX_WITNESSES = 10
DEFAULT_Q = 0.5


def plan_id(plan: TransportPlan) -> str:
    blob = json.dumps(io.plan_to_dict(plan), sort_keys=True).encode()
    return hashlib.sha1(blob).hexdigest()[:10]


def _parse_p(text: str) -> CostSpec:
    if text.strip().lower() == "zero":
        return ZERO_COST
    try:
        return CostSpec(io.parse_num(text) if "/" in text else float(text))
    except ValueError as exc:
        raise DomainError(f"bad exponent {text!r}") from exc


def _parse_schedule(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise DomainError(f"bad schedule {text!r}") from exc


def _workers() -> int:
    env = os.environ.get("EXCURSION_OT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise DomainError(f"EXCURSION_OT_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _measures(args) -> tuple[Measure, Measure]:
    if len(args.inputs) == 2:
        mu, nu = io.load_measure(args.inputs[0]), io.load_measure(args.inputs[1])
    elif not args.inputs and args.seed is not None:
        mu, nu = random_atomic_pair(random.Random(args.seed))
    else:
        raise DomainError("give two measure files, or --seed to generate an instance")
    if args.discretize:
        # approximation: n equal-mass atoms per side, labeled in the output
        mu, nu = discretize(mu, args.discretize), discretize(nu, args.discretize)
    return mu, nu


def _labeled(args, payload: dict, mu: Measure, nu: Measure) -> dict:
    payload = dict(payload)
    if args.discretize:
        payload["approximation"] = f"inputs discretized to {args.discretize} equal-mass atoms"
    if not args.inputs:
        payload["instance"] = {"seed": args.seed, "mu": io.measure_to_dict(mu), "nu": io.measure_to_dict(nu)}
    return payload


def _arch_rows(plan: TransportPlan) -> list[list[str]]:
    rows = [["route", io.num(r.x), io.num(r.y), io.num(r.mass), io.num(abs(r.y - r.x))] for r in plan.routes]
    for cv in plan.curves:
        mid = (cv.h0 + cv.h1) / 2
        x, y = cv.x(mid), cv.y(mid)
        rows.append(["curve", io.num(x), io.num(y), io.num(cv.mass), io.num(abs(y - x))])
    return rows


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def emit_plot_data(out_dir, mu: Measure | None = None, nu: Measure | None = None,
                   plan: TransportPlan | None = None, sweep=None) -> list[Path]:
    """Write CSV tables for external plotting; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if mu is not None and nu is not None:
        f = build_sigma(common_mass_split(mu, nu))
        path = out / "fsigma.csv"
        _write_csv(path, ["x", "F_left", "F", "slope_right"],
                   [[io.num(x), io.num(l), io.num(v), io.num(s)]
                    for x, l, v, s in zip(f.points, f.lefts, f.values, f.slopes)])
        written.append(path)
        path = out / "indicatrix.csv"
        _write_csv(path, ["h_lo", "h_hi", "crossings", "up", "down"],
                   [[io.num(b.lo), io.num(b.hi), len(b.crossings), b.count_up, b.count_down]
                    for b in indicatrix(f).bands])
        written.append(path)
    if plan is not None:
        path = out / "arches.csv"
        _write_csv(path, ["kind", "x", "y", "mass", "length"], _arch_rows(plan))
        written.append(path)
    if sweep is not None:
        path = out / "sweep.csv"
        _write_csv(path, ["p", "value", "plan_id"],
                   [[io.num(p), io.num(r.value), plan_id(r.plan)] for p, r in sweep.reports])
        written.append(path)
    return written


def _plan_csv(plan: TransportPlan) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "x", "y", "mass", "length"])
    w.writerows(_arch_rows(plan))
    return buf.getvalue()


def _cmd_excursion(args):
    mu, nu = _measures(args)
    plan = excursion_coupling(mu, nu)
    if args.plot_dir:
        emit_plot_data(args.plot_dir, mu, nu, plan)
    if args.format == "csv":
        return _plan_csv(plan)
    return _labeled(args, {"plan": io.plan_to_dict(plan)}, mu, nu)


def _cmd_solve(args):
    mu, nu = _measures(args)
    c = _parse_p(args.p)
    if args.oracle:
        plans = sorted(brute_force_lp(mu, nu, c), key=lambda p: p.routes)
        return _labeled(args, {"cost": str(c), "optimal_vertices": [io.plan_to_dict(p) for p in plans],
                               "value": io.num(cost(plans[0], c))}, mu, nu)
    report = solve_lp(mu, nu, c)
    if args.plot_dir:
        emit_plot_data(args.plot_dir, mu, nu, report.plan)
    if args.format == "csv":
        return _plan_csv(report.plan)
    return _labeled(args, io.report_to_dict(report), mu, nu)


def _cmd_secondary(args):
    mu, nu = _measures(args)
    if args.oracle:
        plan = brute_force_lexico(mu, nu, args.q)
        return _labeled(args, {"q": io.num(args.q), "plan": io.plan_to_dict(plan),
                               "value": io.num(cost(plan, CostSpec(args.q)))}, mu, nu)
    report = solve_secondary(mu, nu, args.q)
    if args.plot_dir:
        emit_plot_data(args.plot_dir, mu, nu, report.plan)
    if args.format == "csv":
        return _plan_csv(report.plan)
    return _labeled(args, io.report_to_dict(report), mu, nu)


def _cmd_sweep(args):
    mu, nu = _measures(args)
    if not args.schedule:
        raise DomainError("sweep needs --schedule")
    result = sweep_p(mu, nu, _parse_schedule(args.schedule), workers=_workers())
    if args.plot_dir:
        emit_plot_data(args.plot_dir, mu, nu, result.final_plan, result)
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "value", "plan_id"])
        w.writerows([io.num(p), io.num(r.value), plan_id(r.plan)] for p, r in result.reports)
        return buf.getvalue()
    payload = {
        "stable_from": result.stable_from,
        "reports": [dict(io.report_to_dict(r), p=io.num(p), plan_id=plan_id(r.plan)) for p, r in result.reports],
        "final_equals_excursion": result.final_plan == excursion_coupling(mu, nu),
    }
    return _labeled(args, payload, mu, nu)


def _cmd_check(args):
    if len(args.inputs) == 1:
        plan = io.load_plan(args.inputs[0])
    else:
        plan = excursion_coupling(*_measures(args))
    v = check_plan(plan)

    def wit(pairs):
        return [[[io.num(a) for a in r1], [io.num(a) for a in r2]] for r1, r2 in pairs[:MAX_WITNESSES]]

    return {
        "verdict": v.summary(),
        "crossing": wit(v.crossing_violations),
        "connection": wit(v.connection_violations),
        "orientation": wit(v.orientation_violations),
        "counts": {
            "crossing": len(v.crossing_violations),
            "connection": len(v.connection_violations),
            "orientation": len(v.orientation_violations),
        },
    }


def _cmd_indicatrix(args):
    mu, nu = _measures(args)
    profile = indicatrix(build_sigma(common_mass_split(mu, nu)))
    if args.plot_dir:
        emit_plot_data(args.plot_dir, mu, nu)
    bands = [
        {
            "h_lo": io.num(b.lo),
            "h_hi": io.num(b.hi),
            "crossings": [
                {"direction": c.direction.value, "slope": io.num(c.slope), "intercept": io.num(c.intercept)}
                for c in b.crossings
            ],
        }
        for b in profile.bands
    ]
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h_lo", "h_hi", "crossings", "up", "down"])
        w.writerows([io.num(b.lo), io.num(b.hi), len(b.crossings), b.count_up, b.count_down] for b in profile.bands)
        return buf.getvalue()
    return _labeled(args, {"bands": bands}, mu, nu)


def _cmd_oracle(args):
    # with --q: lexicographic oracle, otherwise all optimal vertices for --p
    args.oracle = True
    if args.q is None:
        return _cmd_solve(args)
    return _cmd_secondary(args)


def _cmd_compare(args):
    mu, nu = _measures(args)
    exc = excursion_coupling(mu, nu)
    out = {
        "excursion": io.plan_to_dict(exc),
        "quantile_distance": plan_distance(exc, quantile_coupling(mu, nu)),
        "antitone_distance": plan_distance(exc, antitone_coupling(mu, nu)),
    }
    if mu.is_atomic and nu.is_atomic:
        sec = solve_secondary(mu, nu, args.q)
        out["secondary_equals_excursion"] = sec.plan == exc
        if args.schedule:
            sw = sweep_p(mu, nu, _parse_schedule(args.schedule), workers=_workers())
            out["sweep_final_equals_excursion"] = sw.final_plan == exc
            out["sweep_stable_from"] = sw.stable_from
        if max(len(mu.atoms), len(nu.atoms)) <= 5:
            out["oracle_equals_excursion"] = brute_force_lexico(mu, nu, args.q) == exc
    out["monotone"] = check_plan(exc).summary()
    for k in ("quantile_distance", "antitone_distance"):
        out[k] = io.num(out[k])
    return _labeled(args, out, mu, nu)


HANDLERS = {
    "excursion": _cmd_excursion,
    "solve": _cmd_solve,
    "secondary": _cmd_secondary,
    "sweep": _cmd_sweep,
    "check-monotone": _cmd_check,
    "indicatrix": _cmd_indicatrix,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="excursion-ot", description="Excursion coupling and concave-cost transport on the line.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="*", help="measure JSON files (or one plan JSON for check-monotone)")
    ap.add_argument("--p", default="1", help="cost exponent, or 'zero' for the x != y indicator")
    ap.add_argument("--q", type=float, default=None, help="secondary exponent in ]0,1[ (default 0.5; the oracle command switches to the lexicographic oracle when given)")
    ap.add_argument("--schedule", help="comma-separated increasing exponents in ]0,1[")
    ap.add_argument("--oracle", action="store_true", help="use brute-force vertex enumeration")
    ap.add_argument("--seed", type=int, help="generate a random atomic instance when no inputs are given")
    ap.add_argument("--discretize", type=int, default=0, metavar="N",
                    help="replace each input by N equal-mass atoms (approximation)")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--output", help="write the result here instead of stdout")
    ap.add_argument("--plot-dir", help="also write CSV tables for plotting into this directory")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("secondary", "compare") and args.q is None:
            args.q = DEFAULT_Q
        result = HANDLERS[args.command](args)
    except DomainError as exc:
        print(json.dumps({"error": "domain", "type": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(json.dumps({"error": "invariant", "type": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    text = result if isinstance(result, str) else io.dumps(result)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

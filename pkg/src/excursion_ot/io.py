"""JSON encoding of measures, plans and solve reports.

Exact quantities are written as rational strings (``"1/2"``), floats as
decimal strings with 15 significant digits; JSON never carries binary floats.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import DomainError
from .excursion import Affine, TransportPlan
from .measure import Measure, to_fraction

__all__ = [
    "num",
    "parse_num",
    "measure_to_dict",
    "measure_from_dict",
    "plan_to_dict",
    "plan_from_dict",
    "report_to_dict",
    "load_measure",
    "load_plan",
    "dumps",
]


def num(v) -> str:
    if isinstance(v, float):
        return format(v, ".15g")
    return str(Fraction(v))


def parse_num(v) -> Fraction:
    try:
        return to_fraction(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DomainError(f"not a number: {v!r}") from exc


def measure_to_dict(m: Measure) -> dict:
    return {
        "atoms": [{"x": num(a.x), "w": num(a.w)} for a in m.atoms],
        "uniform": [{"a": num(p.a), "b": num(p.b), "w": num(p.w)} for p in m.uniforms],
    }


def measure_from_dict(d: dict) -> Measure:
    if not isinstance(d, dict):
        raise DomainError("measure JSON must be an object")
    try:
        atoms = [(parse_num(a["x"]), parse_num(a["w"])) for a in d.get("atoms", [])]
        uniforms = [
            (parse_num(u["a"]), parse_num(u["b"]), parse_num(u["w"])) for u in d.get("uniform", [])
        ]
    except KeyError as exc:
        raise DomainError(f"measure JSON entry missing field {exc}") from exc
    return Measure(atoms=atoms, uniforms=uniforms)


def plan_to_dict(plan: TransportPlan) -> dict:
    return {
        "routes": [{"x": num(r.x), "y": num(r.y), "m": num(r.mass)} for r in plan.routes],
        "curves": [
            {
                "h0": num(c.h0),
                "h1": num(c.h1),
                "x": [num(c.x.slope), num(c.x.intercept)],
                "y": [num(c.y.slope), num(c.y.intercept)],
            }
            for c in plan.curves
        ],
    }


def plan_from_dict(d: dict) -> TransportPlan:
    if not isinstance(d, dict):
        raise DomainError("plan JSON must be an object")
    try:
        routes = [(parse_num(r["x"]), parse_num(r["y"]), parse_num(r["m"])) for r in d.get("routes", [])]
        curves = [
            (
                parse_num(c["h0"]),
                parse_num(c["h1"]),
                Affine(*map(parse_num, c["x"])),
                Affine(*map(parse_num, c["y"])),
            )
            for c in d.get("curves", [])
        ]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed plan JSON: {exc}") from exc
    return TransportPlan(routes, curves)


def report_to_dict(report) -> dict:
    u, v = report.duals
    return {
        "cost": str(report.cost),
        "exact": report.exact,
        "value": num(report.value),
        "plan": plan_to_dict(report.plan),
        "duals": {"u": [num(x) for x in u], "v": [num(x) for x in v]},
        "sources": [num(x) for x in report.sources],
        "targets": [num(y) for y in report.targets],
        "tight_edges": [list(e) for e in sorted(report.tight_edges)],
        "iterations": report.iterations,
    }


def _load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from exc


def load_measure(path) -> Measure:
    return measure_from_dict(_load(path))


def load_plan(path) -> TransportPlan:
    return plan_from_dict(_load(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"

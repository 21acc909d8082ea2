import json
import random
from fractions import Fraction as F

import pytest

from excursion_ot import io
from excursion_ot.cli import emit_plot_data, run
from excursion_ot.errors import DomainError
from excursion_ot.excursion import excursion_coupling
from excursion_ot.instances import random_mixed_pair
from excursion_ot.measure import Measure
from excursion_ot.solve import solve_lp, sweep_p
from excursion_ot.plan import CostSpec


@pytest.fixture
def ex1_files(tmp_path, ex1):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(io.measure_to_dict(ex1[0])))
    b.write_text(json.dumps(io.measure_to_dict(ex1[1])))
    return str(a), str(b)


def test_parse_numbers():
    assert io.parse_num("0.1") == F(1, 10)
    assert io.parse_num("3/9") == F(1, 3)
    assert io.parse_num(2) == 2
    assert io.parse_num(0.25) == F(1, 4)
    with pytest.raises(DomainError):
        io.parse_num("abc")


def test_measure_schema():
    m = io.measure_from_dict(
        {"atoms": [{"x": "0", "w": "1/2"}, {"x": "5", "w": "1/2"}], "uniform": [{"a": "0", "b": "1", "w": "1/4"}]}
    )
    assert m == Measure(atoms=[(0, "1/2"), (5, "1/2")], uniforms=[(0, 1, "1/4")])
    with pytest.raises(DomainError):
        io.measure_from_dict({"atoms": [{"x": "0"}]})


@pytest.mark.parametrize("seed", range(20))
def test_round_trips(seed):
    mu, nu = random_mixed_pair(random.Random(seed))
    assert io.measure_from_dict(json.loads(json.dumps(io.measure_to_dict(mu)))) == mu
    plan = excursion_coupling(mu, nu)
    assert io.plan_from_dict(json.loads(json.dumps(io.plan_to_dict(plan)))) == plan


def test_floats_are_decimal_strings(ex1):
    d = io.report_to_dict(solve_lp(*ex1, CostSpec(0.8)))
    assert isinstance(d["value"], str) and d["value"] == format(4**0.8, ".15g")


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_excursion(capsys, ex1_files, pi_short):
    code, out, _ = _run(capsys, "excursion", *ex1_files)
    assert code == 0
    assert io.plan_from_dict(json.loads(out)["plan"]) == pi_short
    code, out, _ = _run(capsys, "excursion", ex1_files[0], ex1_files[0])
    plan = io.plan_from_dict(json.loads(out)["plan"])
    assert all(r.x == r.y for r in plan.routes)


def test_cli_sweep(capsys, ex1_files, pi_short, pi_nested):
    code, out, _ = _run(capsys, "sweep", *ex1_files, "--schedule", "0.2,0.8")
    reports = json.loads(out)["reports"]
    plans = [io.plan_from_dict(r["plan"]) for r in reports]
    assert code == 0 and plans == [pi_nested, pi_short]


def test_cli_solve_secondary_oracle(capsys, ex1_files, pi_short):
    code, out, _ = _run(capsys, "solve", *ex1_files, "--p", "zero")
    assert code == 0 and json.loads(out)["value"] == "1"
    code, out, _ = _run(capsys, "secondary", *ex1_files, "--q", "0.3")
    assert io.plan_from_dict(json.loads(out)["plan"]) == pi_short
    code, out, _ = _run(capsys, "oracle", *ex1_files, "--p", "0.5")
    assert len(json.loads(out)["optimal_vertices"]) == 2
    code, out, _ = _run(capsys, "oracle", *ex1_files, "--q", "0.5")
    assert io.plan_from_dict(json.loads(out)["plan"]) == pi_short


def test_cli_check_monotone(capsys, tmp_path, pi_nested, ex1_files):
    p = tmp_path / "plan.json"
    p.write_text(json.dumps(io.plan_to_dict(pi_nested)))
    code, out, _ = _run(capsys, "check-monotone", str(p))
    res = json.loads(out)
    assert code == 0 and res["orientation"] == [[["0", "9"], ["5", "4"]]]
    code, out, _ = _run(capsys, "check-monotone", *ex1_files)
    assert json.loads(out)["verdict"] == "clean"


def test_cli_seeded_is_deterministic(capsys):
    _, a, _ = _run(capsys, "compare", "--seed", "7", "--schedule", "0.9,0.99")
    _, b, _ = _run(capsys, "compare", "--seed", "7", "--schedule", "0.9,0.99")
    assert a == b
    res = json.loads(a)
    assert res["secondary_equals_excursion"] and res["oracle_equals_excursion"]
    assert res["monotone"] == "clean"


def test_cli_errors(capsys, tmp_path, ex1_files):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"atoms": [{"x": "0", "w": "2"}]}))
    code, _, err = _run(capsys, "excursion", ex1_files[0], str(bad))
    assert code == 2 and json.loads(err)["error"] == "domain"
    u = tmp_path / "u.json"
    u.write_text(json.dumps({"uniform": [{"a": "0", "b": "1", "w": "1"}]}))
    code, _, _ = _run(capsys, "solve", str(u), ex1_files[0])
    assert code == 2
    code, out, _ = _run(capsys, "solve", str(u), ex1_files[0], "--discretize", "4")
    assert code == 0 and "approximation" in json.loads(out)
    code, _, _ = _run(capsys, "sweep", *ex1_files, "--schedule", "0.8,0.2")
    assert code == 2


def test_cli_invariant_exit_code(capsys, ex1_files, monkeypatch):
    from excursion_ot import cli
    from excursion_ot.errors import InvariantError

    def broken(*_):
        raise InvariantError("parity")

    monkeypatch.setattr(cli, "excursion_coupling", broken)
    code, _, err = _run(capsys, "excursion", *ex1_files)
    assert code == 3 and json.loads(err)["error"] == "invariant"


def test_plot_data(tmp_path, ex1):
    files = emit_plot_data(tmp_path, *ex1, excursion_coupling(*ex1), sweep_p(*ex1, [0.2, 0.5, 0.8]))
    names = {f.name for f in files}
    assert names == {"fsigma.csv", "indicatrix.csv", "arches.csv", "sweep.csv"}
    rows = (tmp_path / "fsigma.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["0", "4", "5", "9"]
    assert len((tmp_path / "sweep.csv").read_text().splitlines()) == 1 + 3
    same = emit_plot_data(tmp_path / "id", ex1[0], ex1[0], excursion_coupling(ex1[0], ex1[0]))
    arches = (tmp_path / "id" / "arches.csv").read_text().splitlines()[1:]
    assert all(r.split(",")[1] == r.split(",")[2] for r in arches) and same

import json

import pytest

from spectra_lab.cli import main


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_bounds_feasible_report(capsys):
    code, out = run(capsys, ["bounds", "--n", "3", "--kappa", "1", "--D", "1",
                             "--i0", "0.1", "--eps", "1e-16", "--eps0", "1e-3",
                             "--lambda", "10"])
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"inputs", "constants", "factor"}
    assert set(rep["constants"]) == {"H", "Gamma", "B", "quad_error"}
    assert rep["factor"]["feasible"] is True
    assert rep["factor"]["multiplier"] > 1.0


def test_bounds_zero_epsilon_multiplier_one(capsys):
    code, out = run(capsys, ["bounds", "--n", "3", "--kappa", "1", "--D", "1",
                             "--eps", "0", "--eps0", "1e-3", "--lambda", "2"])
    assert code == 0
    assert json.loads(out)["factor"]["multiplier"] == 1.0


def test_bounds_infeasible_exit_two(capsys):
    code, out = run(capsys, ["bounds", "--n", "3", "--kappa", "1", "--D", "1",
                             "--eps", "1e-3", "--eps0", "1e-3",
                             "--lambda", "2"])
    assert code == 2
    assert json.loads(out)["factor"]["feasible"] is False


def test_usage_exit_64():
    with pytest.raises(SystemExit) as e:
        main(["bounds", "--n", "3"])
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        main(["verify", "no-such-suite"])
    assert e.value.code == 64


def test_verify_appendix_c_csv(capsys):
    code, out = run(capsys, ["verify", "appendix-c", "--n", "2..4"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("n,eigenvalue,sup_ratio")
    assert len(lines) == 4


def test_verify_appendix_a_small(capsys):
    code, out = run(capsys, ["verify", "appendix-a", "--count", "500",
                             "--n", "2,3"])
    assert code == 0
    rep = json.loads(out)
    assert rep["violations"] == 0
    assert len(rep["reports"]) == 8


def test_verify_cheeger(capsys):
    code, out = run(capsys, ["verify", "cheeger"])
    assert code == 0
    assert json.loads(out)["violations"] == 0


def test_xi_deterministic_bytes(capsys):
    argv = ["xi", "--p", "3", "--x-max", "5", "--points", "11"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second
    assert first.splitlines()[0] == "x,value,tail_bound,upper_closed,upper_power"


def test_experiment_pullback_identity(capsys):
    code, out = run(capsys, ["experiment", "pullback", "--map", "identity",
                             "--subdiv", "1"])
    assert code == 0
    rep = json.loads(out)
    assert abs(rep["delta"]) < 1e-10 and abs(rep["epsilon"]) < 1e-10
    assert rep["bound_ok"]


def test_experiment_outputs_to_files(tmp_path, capsys):
    csv_path = tmp_path / "sweep.csv"
    json_path = tmp_path / "sweep.json"
    code = main(["experiment", "torus-convergence", "--sizes", "8,12",
                 "-o", str(csv_path)])
    assert code == 0
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0].startswith("grid,vertices,lambda1")
    assert len(rows) == 3
    code = main(["experiment", "mushroom", "--subdiv", "1", "--epsilon", "1.2",
                 "--deltas", "1e-1,3e-2", "-o", str(csv_path),
                 "--json-output", str(json_path)])
    assert code == 0
    rep = json.loads(json_path.read_text())
    assert rep["monotone_decreasing"] is True
    capsys.readouterr()

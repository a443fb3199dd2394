# tests/test_cli.py
import json

import pandas as pd
import pytest

from controllers.cli_controller import EXIT_BUDGET, EXIT_ERROR, EXIT_OK, EXIT_REJECTED
from main import main
from tests.conftest import INPUT

Q1 = str(INPUT / "q1.json")
LIMITATION = str(INPUT / "limitation.json")


def test_gen_and_build(tmp_path, capsys):
    out = tmp_path / "q2.json"
    assert main(["gen", "--preset", "Q2", "--seed", "3", "--out", str(out)]) == EXIT_OK
    assert out.exists()
    capsys.readouterr()
    assert main(["build", "--scenario", Q1]) == EXIT_OK
    assert "rows=184 cols=252" in capsys.readouterr().out


def test_export(tmp_path):
    out = tmp_path / "q1.mps"
    assert main(["export", "--scenario", Q1, "--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="ascii").startswith("NAME")


def test_solve_exact_then_verify(tmp_path, capsys):
    sol = tmp_path / "sol.json"
    soc = tmp_path / "soc.csv"
    assert main(["solve-exact", "--scenario", Q1, "--out", str(sol)]) == EXIT_OK
    assert "status=Optimal objective=2" in capsys.readouterr().out
    assert json.loads(sol.read_text(encoding="utf-8"))["method"] == "bb"
    assert main(["verify", "--scenario", Q1, "--solution", str(sol), "--trajectory", str(soc)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accepted"
    assert len(pd.read_csv(soc)) == 2 * 10


def test_budget_exit_code():
    assert main(["solve-exact", "--scenario", Q1, "--budget-nodes", "3", "--backend", "bb"]) == EXIT_BUDGET


def test_objective_flag(capsys):
    assert main(["solve-exact", "--scenario", Q1, "--backend", "milp", "--objective", "feasibility"]) == EXIT_OK
    assert "status=Optimal objective=0" in capsys.readouterr().out
    assert main(["build", "--scenario", Q1, "--objective", "energy"]) == EXIT_OK


def test_solve_rv2vc(tmp_path, capsys):
    sol, edges = tmp_path / "rv.json", tmp_path / "edges.csv"
    assert main(["solve-rv2vc", "--scenario", Q1, "--out", str(sol), "--edges-out", str(edges)]) == EXIT_OK
    assert "objective=2" in capsys.readouterr().out
    assert len(pd.read_csv(edges)) == 2
    assert main(["verify", "--scenario", Q1, "--solution", str(sol)]) == EXIT_OK


def test_rv2vc_infeasible_on_limitation(capsys):
    assert main(["solve-rv2vc", "--scenario", LIMITATION, "--g2vc-edges", "on"]) == EXIT_REJECTED
    out = capsys.readouterr().out
    assert "status=Infeasible" in out and "C" in out


def test_verify_rejects_tampered_solution(tmp_path, capsys):
    sol = tmp_path / "sol.json"
    main(["solve-exact", "--scenario", Q1, "--out", str(sol)])
    doc = json.loads(sol.read_text(encoding="utf-8"))
    doc["nonzeros"].pop(next(iter(doc["nonzeros"])))
    sol.write_text(json.dumps(doc), encoding="utf-8")
    capsys.readouterr()
    assert main(["verify", "--scenario", Q1, "--solution", str(sol), "--strict"]) == EXIT_REJECTED
    assert capsys.readouterr().out.startswith("rejected: ")


def test_reduce_with_witness(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 0\n", encoding="utf-8")
    scenario, witness = tmp_path / "f.json", tmp_path / "w.json"
    assert main(["reduce", "--cnf", str(cnf), "--out", str(scenario), "--witness", str(witness)]) == EXIT_OK
    assert main(["verify", "--scenario", str(scenario), "--solution", str(witness)]) == EXIT_OK


def test_reduce_unsatisfiable_witness(tmp_path):
    cnf = tmp_path / "u.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n", encoding="utf-8")
    code = main(["reduce", "--cnf", str(cnf), "--out", str(tmp_path / "u.json"),
                 "--witness", str(tmp_path / "w.json")])
    assert code == EXIT_REJECTED
    assert not (tmp_path / "w.json").exists()


def test_bench_and_plotdata(tmp_path):
    csv = tmp_path / "bench.csv"
    assert main(["--log-level", "WARNING", "bench", "--suite", "Q", "--methods", "rv2vc",
                 "--seed", "0", "--runs", "1", "--out", str(csv)]) == EXIT_OK
    frame = pd.read_csv(csv)
    assert list(frame["id"]) == ["Q1", "Q2", "Q3", "Q4", "Q5", "Q6"]
    assert not (frame["exact_status"] == "Optimal").any()
    assert main(["plotdata", "--bench", str(csv), "--out", str(tmp_path / "plots")]) == EXIT_OK
    assert (tmp_path / "plots" / "timing.csv").exists()


@pytest.mark.parametrize("argv", [
    ["build", "--scenario", "missing.json"],
    ["gen", "--preset", "Z9", "--out", "never.json"],
    ["reduce", "--cnf", "missing.cnf", "--out", "never.json"],
    ["bench", "--methods", "gurobi", "--out", "never.csv"],
    ["plotdata", "--bench", "missing.csv", "--out", "never"],
    ["build", "--scenario", Q1, "--objective", "time"],
], ids=["scenario", "preset", "cnf", "method", "bench-csv", "objective"])
def test_errors_are_one_line(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_ERROR
    out = capsys.readouterr().out.strip()
    assert out.startswith("error: ") and "\n" not in out


def test_invalid_scenario_is_an_error(tmp_path, capsys):
    doc = json.loads((INPUT / "q1.json").read_text(encoding="utf-8"))
    doc["evs"][0]["SOC_i"] = 99
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["solve-exact", "--scenario", str(bad)]) == EXIT_ERROR
    assert "SOC" in capsys.readouterr().out

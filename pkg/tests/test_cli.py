import json
from pathlib import Path

import pytest

from papkit.cli import run_cli

CONFIGS = Path(__file__).resolve().parents[1] / "src" / "papkit" / "configs"


def run(args):
    return run_cli([str(a) for a in args])


def test_version_and_unknown_subcommand(capsys):
    assert run(["--version"]) == 0
    assert run(["frobnicate"]) == 2


def test_unreadable_config(tmp_path, capsys):
    out = tmp_path / "x.json"
    code = run(["solve", "--config", tmp_path / "missing.json", "--out", out])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["code"] == "schema"


def test_solve_twocell(tmp_path):
    out = tmp_path / "sol.json"
    code = run(["solve", "--config", CONFIGS / "twocell.json", "--signal", "0", "--out", out])
    assert code == 0
    sol = json.loads(out.read_text())
    assert sol["power"] == pytest.approx(0.5, abs=1e-9)
    assert sol["solver"]["status"] == "optimal"
    assert sol["extremal"]["is_extremal"] is True
    assert sol["config_digest"]
    # the returned rule rejects exactly the high cell on the full slice
    values = {
        (e["mask"], tuple(e["x"])): e["value"] for e in sol["rule"]["entries"]
    }
    assert values[(1, (1,))] == 1.0 and values[(1, (0,))] == 0.0


def test_solve_unknown_signal(tmp_path, capsys):
    out = tmp_path / "sol.json"
    code = run(["solve", "--config", CONFIGS / "twocell.json", "--signal", "9", "--out", out])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["field_path"] == "signal"


def test_power_csv_shape_and_size_row(tmp_path):
    out = tmp_path / "power.csv"
    code = run([
        "power", "--config", CONFIGS / "motivating_n2.json",
        "--reps", 20000, "--out", out,
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("# config_digest=")
    assert lines[1] == "theta,rule,power,se"
    rows = [l.split(",") for l in lines[2:]]
    assert len(rows) == 5 * 13  # five rules, thirteen thetas
    a1_at_zero = [r for r in rows if r[0] == "0.0" and r[1] == "a1"]
    assert float(a1_at_zero[0][2]) == pytest.approx(0.05)


def test_power_rejects_bad_kind(tmp_path, capsys):
    out = tmp_path / "power.csv"
    code = run([
        "power", "--config", CONFIGS / "motivating_n2.json",
        "--kinds", "a9", "--out", out,
    ])
    assert code == 2


def test_byte_identical_reruns(tmp_path):
    out1 = tmp_path / "p1.csv"
    out2 = tmp_path / "p2.csv"
    for out in (out1, out2):
        assert run([
            "power", "--config", CONFIGS / "motivating_n2.json",
            "--reps", 20000, "--kinds", "a1,a5", "--out", out,
        ]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_check_flags_naive_rule(tmp_path):
    # build a discretized two-site instance and the selective-reporting
    # envelope rule, then run the checker against both files
    import helpers

    problem = helpers.sec2_problem(cells=12)
    rule = helpers.naive_rule(problem)
    grid = problem.grid
    prob_file = tmp_path / "problem.json"
    prob_file.write_text(json.dumps({
        "statistics": [
            {"name": f"x{i}", "edges": grid.edges[i].tolist(),
             "midpoints": grid.midpoints[i].tolist()}
            for i in range(2)
        ],
        "null": {"table": problem.null_table.tolist()},
        "availability": {"independent": [0.9, 0.5]},
        "signals": [{"id": 0, "atoms": [{"weight": 1.0,
                                         "table": problem.prior(0).mixture.tolist()}]}],
        "alpha": 0.05,
    }))
    rule_file = tmp_path / "rule.json"
    rule_file.write_text(json.dumps(rule.to_json_dict()))
    out = tmp_path / "report.json"
    code = run(["check", "--rule", rule_file, "--problem", prob_file, "--out", out])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is False
    assert report["reports"]["monotonicity"]["passed"] is True  # envelope is monotone
    assert report["reports"]["size"]["passed"] is False
    assert report["reports"]["size"]["max_value"] > 0.05


def test_casestudy_simple_family(tmp_path):
    cfg = json.loads((CONFIGS / "casestudy_illustrative.json").read_text())
    cfg["reps"] = 100_000
    cfg["eval_reps"] = 100_000
    cfg_file = tmp_path / "cs.json"
    cfg_file.write_text(json.dumps(cfg))
    out = tmp_path / "fit.json"
    code = run([
        "casestudy", "--config", cfg_file, "--mode", "simple",
        "--family", "wald-fixed-subset", "--out", out,
    ])
    assert code == 0
    fit = json.loads(out.read_text())
    assert fit["result"]["spec"]["mask"] == 2
    assert 0.0 < fit["result"]["power"] < 1.0


def test_casestudy_map(tmp_path):
    cfg = json.loads((CONFIGS / "casestudy_illustrative.json").read_text())
    cfg["reps"] = 100_000
    cfg["p1_grid"] = [0.0, 1.0]
    cfg["p2_grid"] = [1.0]
    cfg_file = tmp_path / "cs.json"
    cfg_file.write_text(json.dumps(cfg))
    out = tmp_path / "map.csv"
    code = run(["casestudy", "--config", cfg_file, "--mode", "map", "--out", out])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[1] == "p1,p2,subset"
    got = {tuple(l.split(",")[:2]): int(l.split(",")[2]) for l in lines[2:]}
    assert got[("1.0", "1.0")] == 0b11
    assert got[("0.0", "1.0")] == 0b10


def test_casestudy_deterministic(tmp_path):
    cfg = json.loads((CONFIGS / "casestudy_illustrative.json").read_text())
    cfg["reps"] = 100_000
    cfg["eval_reps"] = 100_000
    cfg_file = tmp_path / "cs.json"
    cfg_file.write_text(json.dumps(cfg))
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert run([
            "casestudy", "--config", cfg_file, "--mode", "simple",
            "--family", "arm-specific-cutoffs", "--out", out,
        ]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]

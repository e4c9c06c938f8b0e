"""Subcommands, exit codes, and byte-stable file outputs."""

import json

import pytest

from groupoid_ga.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_text(capsys):
    code, out, _ = run_cli(capsys, "check", "000/111")
    assert code == 0
    assert "genetic: true" in out
    assert "associative: false" in out


def test_check_json(capsys):
    code, out, _ = run_cli(capsys, "check", "001/122", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["format_version"] == 1
    assert payload["operations"][0]["rectangular_band"] is True


def test_check_builtin_name(capsys):
    code, out, _ = run_cli(capsys, "check", "GA(2;1,1,1)")
    assert code == 0
    assert "order: 8" in out
    assert "all operations genetic: true" in out


def test_check_json_file_input(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"order": 2, "ops": [[[0, 0], [1, 1]]]}))
    code, out, _ = run_cli(capsys, "check", str(path))
    assert code == 0
    assert "genetic: true" in out


@pytest.mark.parametrize("bad", ["000/000", "00/111", "GA(2;1)", "missing.json"])
def test_check_malformed_exits_2(capsys, bad):
    code, _, err = run_cli(capsys, "check", bad)
    assert code == 2
    assert "error" in err


def test_product_writes_table_and_sidecar(tmp_path, capsys):
    out = tmp_path / "prod.json"
    code, stdout, _ = run_cli(
        capsys, "product", "bare:1", "bare:1", "--format", "json", "--out", str(out)
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["order"] == 4
    assert len(payload["ops"]) == 1
    sidecar = tmp_path / "prod.shape.json"
    assert sidecar.exists()
    shape = json.loads(sidecar.read_text())
    assert shape["shape"]["factor_orders"] == [2, 2]


def test_product_tuple_rendering(capsys):
    code, out, _ = run_cli(capsys, "product", "bare:1", "bare:1")
    assert code == 0
    assert "(0,0)" in out and "(1,1)" in out


def test_enumerate_text(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--order", "3")
    assert code == 0
    assert "216 genetic tables" in out
    assert "22 classes" in out


def test_enumerate_json(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--order", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["raw_count"] == 2
    assert payload["class_count"] == 1


def test_enumerate_capacity(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--order", "5")
    assert code == 2
    assert "capacity" in err


def test_verify_lemma1_exit_0(capsys):
    code, out, _ = run_cli(capsys, "verify", "lemma1")
    assert code == 0
    assert "[lemma1] PASS" in out


def test_verify_theorem1_exit_0(capsys):
    code, out, _ = run_cli(capsys, "verify", "theorem1")
    assert code == 0


def test_verify_theorem2_reports_delta_and_exits_1(capsys):
    code, out, _ = run_cli(capsys, "verify", "theorem2")
    assert code == 1
    assert "FAIL" in out
    assert "22" in out  # census truth surfaced


def test_verify_all_aggregate_json(tmp_path, capsys):
    out = tmp_path / "verify.json"
    code, stdout, _ = run_cli(capsys, "verify", "all", "--format", "json", "--out", str(out))
    assert code == 1  # theorem2 delta keeps the aggregate red
    payload = json.loads(out.read_text())
    names = [r["theorem"] for r in payload["reports"]]
    assert names == ["theorem1", "theorem2", "lemma1", "not-variety"]
    passed = {r["theorem"]: r["passed"] for r in payload["reports"]}
    assert passed == {
        "theorem1": True,
        "theorem2": False,
        "lemma1": True,
        "not-variety": True,
    }


def test_run_ga_writes_reports(tmp_path, capsys):
    cfg = {
        "population": 12,
        "generations": 10,
        "seeds": [0, 1],
        "fitness": "onemax",
        "families": [
            {
                "name": "smoke",
                "shape": ["bare:1", "bare:1", "bare:1"],
                "mutations": [{"factor": 0, "perm": [1, 0], "prob": 0.1}],
            }
        ],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    code, stdout, _ = run_cli(capsys, "run-ga", str(cfg_path), "--out", str(out_dir))
    assert code == 0
    assert (out_dir / "report.json").exists()
    assert (out_dir / "curves.csv").exists()
    assert (out_dir / "convergence.png").exists()
    report = json.loads((out_dir / "report.json").read_text())
    assert report["format_version"] == 1

    # byte-identical on a second run, and under a different worker count
    out2 = tmp_path / "out2"
    run_cli(capsys, "run-ga", str(cfg_path), "--out", str(out2))
    assert (out_dir / "curves.csv").read_bytes() == (out2 / "curves.csv").read_bytes()
    assert (out_dir / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    out3 = tmp_path / "out3"
    run_cli(capsys, "run-ga", str(cfg_path), "--out", str(out3), "--jobs", "4")
    assert (out_dir / "curves.csv").read_bytes() == (out3 / "curves.csv").read_bytes()


def test_run_ga_seed_override(tmp_path, capsys):
    cfg = {
        "population": 12,
        "generations": 8,
        "seeds": [0, 1, 2],
        "fitness": "onemax",
        "shape": ["bare:1", "bare:1"],
        "mutations": [],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    code, _, _ = run_cli(capsys, "run-ga", str(cfg_path), "--out", str(out_dir), "--seed", "7")
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    seeds = [r["seed"] for r in report["families"][0]["runs"]]
    assert seeds == [7]


def test_run_ga_invalid_config_lists_all_violations(tmp_path, capsys):
    cfg = {
        "population": 1,
        "generations": 0,
        "seeds": [],
        "fitness": "nope",
        "families": [{"name": "x", "shape": ["bad-spec"], "mutations": []}],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code, _, err = run_cli(capsys, "run-ga", str(cfg_path), "--out", str(tmp_path / "o"))
    assert code == 2
    assert "population" in err
    assert "generations" in err
    assert "seeds" in err
    assert "bad-spec" in err


def test_run_ga_unknown_fitness_exits_2(tmp_path, capsys):
    cfg = {
        "population": 8,
        "generations": 5,
        "seed": 0,
        "fitness": "hill-climber",
        "shape": ["bare:1"],
        "mutations": [],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code, _, err = run_cli(capsys, "run-ga", str(cfg_path), "--out", str(tmp_path / "o"))
    assert code == 2
    assert "unknown fitness" in err


def test_bundled_configs_parse(capsys):
    from pathlib import Path

    from groupoid_ga.engine import parse_experiment_config

    for name in ("classical_onemax.json", "nonassociative_onemax.json", "families_demo.json"):
        path = Path(__file__).resolve().parent.parent / "configs" / name
        parse_experiment_config(json.loads(path.read_text()))

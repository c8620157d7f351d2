import csv
import json
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from qsubgrad.cli import (TRACE_COLUMNS, ConfigError, ExperimentConfig, main, parse_config,
                          print_config, run_experiment)

A1_CONFIG = """
[experiment]
name = norm_dynamic

[problem]
family = power_norm
center = [0.0, 0.0]

[feasible]
kind = box
lower = [-10, -10]
upper = [10, 10]

[solver]
kind = standard

[stepsize]
rule = dynamic
lambda = 0.5

[run]
x1 = [3, 4]
max_iter = 40

[checks]
ids = ["h1", "h3", "t3.4i"]
q = 1
eta = 1
radius = 20
"""

MINIMAL = """
[experiment]
name = minimal
[problem]
family = power_norm
[solver]
kind = standard
[stepsize]
rule = constant
v = 0.1
[run]
x1 = [3, 4]
max_iter = 1000
"""


def write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_minimal_config_parses():
    cfg = parse_config(MINIMAL)
    assert cfg.name == "minimal"
    assert cfg.stepsize == {"rule": "constant", "v": 0.1}
    assert cfg.check_ids == []


def test_config_errors():
    with pytest.raises(ConfigError, match=r"s must lie in \(0,1\)"):
        parse_config(MINIMAL.replace("rule = constant\nv = 0.1",
                                     "rule = diminishing\nc = 1\ns = 1.5"))
    with pytest.raises(ConfigError, match="k3 requires dynamic rule"):
        parse_config(MINIMAL + "[checks]\nids = [\"k3\"]\ndelta = 0.5\n")
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("max_iter = 1000", "max_iter = 0\nbogus = 1"))
    assert "run.max_iter: must be an integer >= 1" in err.value.errors
    assert "run.bogus: unknown key" in err.value.errors
    with pytest.raises(ConfigError, match="unknown family"):
        parse_config(MINIMAL.replace("power_norm", "rosenbrock"))
    with pytest.raises(ConfigError, match="expected 2 coordinates"):
        parse_config(MINIMAL.replace("[3, 4]", "[3]"))
    with pytest.raises(ConfigError, match="missing section"):
        parse_config("[experiment]\nname = x\n")
    with pytest.raises(ConfigError, match="delta"):
        parse_config(MINIMAL + "[checks]\nids = [\"k1\"]\n")


def test_round_trip_examples():
    for text in (MINIMAL, A1_CONFIG):
        cfg = parse_config(text)
        assert parse_config(print_config(cfg)) == cfg


names = st.text(alphabet="abcdefghijklmnopqrstuvwxyz_0123456789", min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(name=names, v=st.floats(1e-6, 1e3), x=st.lists(st.floats(-10, 10), min_size=2,
                                                       max_size=2),
       iters=st.integers(1, 10 ** 6), rule=st.sampled_from(["constant", "diminishing",
                                                             "dynamic"]),
       s=st.floats(0.01, 0.99), lam=st.floats(0.01, 1.99), seed=st.integers(0, 2 ** 31),
       gap_stop=st.one_of(st.none(), st.floats(0, 10)))
def test_round_trip_property(name, v, x, iters, rule, s, lam, seed, gap_stop):
    stepsize = {"constant": {"rule": "constant", "v": v},
                "diminishing": {"rule": "diminishing", "c": v, "s": s},
                "dynamic": {"rule": "dynamic", "lambda": [lam, lam / 2]}}[rule]
    ids = {"constant": ["h1", "k1"], "diminishing": ["t3.5i"], "dynamic": ["k3", "t3.4i"]}[rule]
    cfg = ExperimentConfig(
        name=name, problem={"family": "power_norm", "center": [0.0, 0.0], "exponent": 1.0},
        feasible={"kind": "ball", "center": [0.0, 0.0], "radius": 20.0},
        solver={"kind": "inexact", "epsilon": 0.1, "tilt": 1.0}, stepsize=stepsize,
        run={"x1": x, "max_iter": iters, "gap_stop": gap_stop, "seed": seed,
             "record_points": False},
        checks={"ids": ids, "delta": 0.5, "N": None})
    assert parse_config(print_config(cfg)) == cfg


def test_run_writes_trace_and_report(tmp_path):
    cfg = parse_config(A1_CONFIG)
    assert run_experiment(cfg, str(tmp_path)) == 0
    with open(tmp_path / "norm_dynamic.trace.csv") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert len(rows) == 41
    assert rows[1] == ["1", "5", "5", "5", "25", "2.5", "2.5", "0"]
    report = json.loads((tmp_path / "norm_dynamic.report.json").read_text())
    assert report["experiment"] == "norm_dynamic"
    assert report["summary"] == "pass"
    assert [c["id"] for c in report["checks"]] == ["h1", "h3", "t3.4i"]
    assert report["config"]["stepsize"] == {"rule": "dynamic", "lambda": 0.5}


def test_trace_rows_use_17_significant_digits(tmp_path):
    cfg = parse_config(MINIMAL.replace("max_iter = 1000", "max_iter = 3").replace(
        "x1 = [3, 4]", "x1 = [0.1, 0.2]"))
    assert run_experiment(cfg, str(tmp_path)) == 0
    with open(tmp_path / "minimal.trace.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 4
    f = rows[1][1]
    assert float(f) == (0.1 ** 2 + 0.2 ** 2) ** 0.5
    assert f == format((0.1 ** 2 + 0.2 ** 2) ** 0.5, ".17g")


def test_wrong_eta_exits_2(tmp_path, capsys):
    path = write(tmp_path, A1_CONFIG.replace("eta = 1", "eta = 2"))
    assert main(["run", "--config", path, "--out", str(tmp_path), "--quiet"]) == 2
    report = json.loads((tmp_path / "norm_dynamic.report.json").read_text())
    failing = [c for c in report["checks"] if not c["holds"]]
    assert [c["id"] for c in failing] == ["t3.4i"]
    assert failing[0]["floor"] == 0.0 and "eta=2" in failing[0]["reason"]
    assert report["summary"] == "fail"
    assert "t3.4i" in capsys.readouterr().err


def test_missing_output_dir_exits_1(tmp_path):
    path = write(tmp_path, A1_CONFIG)
    assert main(["run", "--config", path, "--out", str(tmp_path / "nope")]) == 1


def test_bad_config_exits_1(tmp_path, capsys):
    path = write(tmp_path, MINIMAL.replace("v = 0.1", "v = -1"))
    assert main(["run", "--config", path, "--out", str(tmp_path)]) == 1
    assert "stepsize.v" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "absent.ini"), "--out", str(tmp_path)]) == 1


def test_out_dir_from_environment(tmp_path, monkeypatch):
    path = write(tmp_path, MINIMAL.replace("max_iter = 1000", "max_iter = 5"))
    out = tmp_path / "env_out"
    out.mkdir()
    monkeypatch.setenv("QSUB_OUT_DIR", str(out))
    assert main(["run", "--config", path, "--quiet"]) == 0
    assert (out / "minimal.trace.csv").exists()


def test_empty_checks_report_passes(tmp_path):
    assert run_experiment(parse_config(MINIMAL), str(tmp_path)) == 0
    report = json.loads((tmp_path / "minimal.report.json").read_text())
    assert report["checks"] == [] and report["summary"] == "pass"


def test_reproducible_traces(tmp_path):
    text = A1_CONFIG.replace("kind = standard", "kind = inexact\nepsilon = 0.01\ntilt = 1.0")
    text = text.replace('ids = ["h1", "h3", "t3.4i"]', 'ids = ["h1", "h3"]')
    path = write(tmp_path, text)
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    for out in (a, b):
        assert main(["run", "--config", path, "--out", str(out), "--seed", "11", "--quiet"]) == 0
    assert (a / "norm_dynamic.trace.csv").read_bytes() == (b / "norm_dynamic.trace.csv").read_bytes()


def test_sweep_writes_one_trace_per_value(tmp_path):
    path = write(tmp_path, MINIMAL.replace("max_iter = 1000", "max_iter = 50"))
    code = main(["sweep", "--config", path, "--out", str(tmp_path), "--param", "stepsize.v",
                 "--values", "0.1,0.2,0.4", "--quiet"])
    assert code == 0
    for v in ("0.1", "0.2", "0.4"):
        assert (tmp_path / f"minimal_stepsize_v_{v}.trace.csv").exists()
    summary = json.loads((tmp_path / "minimal.sweep.json").read_text())
    assert [m["value"] for m in summary["members"]] == [0.1, 0.2, 0.4]
    assert main(["sweep", "--config", path, "--out", str(tmp_path), "--param", "stepsize.v",
                 "--values", "0.1,-1", "--quiet"]) == 1


def test_lemma_sweeps_check_reports_each_part(tmp_path):
    text = MINIMAL.replace("max_iter = 1000", "max_iter = 5") + (
        '[checks]\nids = ["lemma_sweeps"]\nsweep_draws = 20\nsweep_steps = 200\n')
    code = run_experiment(parse_config(text), str(tmp_path))
    report = json.loads((tmp_path / "minimal.report.json").read_text())
    parts = {r["name"]: r for r in report["checks"][0]["results"]}
    assert set(parts) == {"lemma22_i", "lemma22_ii", "lemma23_ii", "lemma23_ii_integral"}
    assert parts["lemma22_i"]["holds"] and parts["lemma23_ii_integral"]["holds"]
    assert code == (0 if parts["lemma23_ii"]["holds"] else 2)


def test_console_script_runs(tmp_path):
    path = write(tmp_path, A1_CONFIG)
    proc = subprocess.run([sys.executable, "-m", "qsubgrad.cli", "run", "--config", path,
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "t3.4i: pass" in proc.stdout

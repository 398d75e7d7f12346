"""Command-line interface: wire formats, exit codes, and route agreement."""
import csv
import json
import shutil
import subprocess

import numpy as np
import pytest

from rwre import (
    SUMMARY_HEADER,
    SiteCounts,
    Uniform,
    estimate_density,
    simulate_bpire,
)
from rwre.cli import main, read_branch_csv


def _density_file(tmp_path, spec, name="density.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


def _beta33(tmp_path):
    return _density_file(tmp_path, {"kind": "beta", "params": {"alpha": 3, "beta": 3}})


def _uniform(tmp_path):
    return _density_file(tmp_path, {"kind": "uniform", "params": {}})


# ----- classify -----

def test_classify_recurrent(tmp_path, capsys):
    assert main(["classify", "--density", _beta33(tmp_path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["class"] == "recurrent"
    assert doc["mean_rho"] == pytest.approx(1.5)
    assert doc["kappa"] is None


def test_classify_ballistic(tmp_path, capsys):
    spec = _density_file(tmp_path, {"kind": "beta", "params": {"alpha": 5, "beta": 2}})
    assert main(["classify", "--density", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["class"] == "transient_right_ballistic"
    assert doc["ballistic_speed"] == pytest.approx(3.0, abs=1e-6)


# ----- simulate -----

def test_simulate_bpire_file_and_determinism(tmp_path):
    d = _uniform(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        code = main(
            [
                "simulate", "--density", d, "--n", "50", "--mode", "bpire",
                "--seed", "5", "--out", str(out),
            ]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert len(lines) == 51
    assert lines[0] == "0"
    assert all(float(line) >= 0 for line in lines)


def test_simulate_bpire_stdout_default(tmp_path, capsys):
    d = _uniform(tmp_path)
    assert main(["simulate", "--density", d, "--n", "10", "--mode", "bpire", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 11
    assert lines[0] == "0"


def test_simulate_walk_file_identities(tmp_path):
    d = _uniform(tmp_path)
    out = tmp_path / "walk.csv"
    code = main(
        [
            "simulate", "--density", d, "--n", "8", "--mode", "walk",
            "--seed", "9", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    meta = dict(tok.split("=") for tok in lines[0][2:].split())
    assert meta["truncated"] == "0"
    assert lines[1] == "y,L,R"
    left, right = {}, {}
    for rec in lines[2:]:
        y, l_cnt, r_cnt = (int(t) for t in rec.split(","))
        if l_cnt:
            left[y] = l_cnt
        if r_cnt:
            right[y] = r_cnt
    counts = SiteCounts(
        n=int(meta["n"]),
        hitting_time=int(meta["T_n"]),
        left=left,
        right=right,
        truncated=False,
    )
    counts.check_step_identities()


# ----- estimate -----

def test_simulate_then_estimate_matches_library(tmp_path):
    d = _uniform(tmp_path)
    z_path = tmp_path / "z.csv"
    est_path = tmp_path / "est.csv"
    assert main(
        [
            "simulate", "--density", d, "--n", "300", "--mode", "bpire",
            "--seed", "5", "--out", str(z_path),
        ]
    ) == 0
    assert main(
        ["estimate", "--data", str(z_path), "--M", "4", "--out", str(est_path)]
    ) == 0

    lines = est_path.read_text().splitlines()
    assert lines[0] == "# n=300 M=4"
    assert lines[1] == "k,x_left,x_right,f_hat"
    body = [line.split(",") for line in lines[2:]]
    assert [int(r[0]) for r in body] == list(range(5))
    assert float(body[-1][1]) == 1.0 and float(body[-1][2]) == 1.0
    assert float(body[0][1]) == 0.0 and float(body[0][2]) == 0.25

    want = estimate_density(
        simulate_bpire(Uniform(), 300, np.random.default_rng(5)), 4
    ).coeffs
    got = np.array([float(r[3]) for r in body])
    assert got.tolist() == want.tolist()  # bit-exact through the file


def test_estimate_dead_chain(tmp_path):
    z_path = tmp_path / "z.csv"
    z_path.write_text("0\n0\n0\n")
    out = tmp_path / "est.csv"
    assert main(["estimate", "--data", str(z_path), "--M", "3", "--out", str(out)]) == 0
    body = out.read_text().splitlines()[2:]
    assert all(float(line.split(",")[3]) == 0.0 for line in body)


def test_branch_file_parsing_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("0\n3\nseven\n")
    out = tmp_path / "est.csv"
    assert main(["estimate", "--data", str(bad), "--M", "2", "--out", str(out)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ParameterError"
    assert "bad.csv:3" in err["detail"]

    empty = tmp_path / "empty.csv"
    empty.write_text("\n\n")
    assert main(["estimate", "--data", str(empty), "--M", "2", "--out", str(out)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert "no data" in err["detail"]

    nonzero = tmp_path / "nonzero.csv"
    nonzero.write_text("2\n3\n")
    assert main(["estimate", "--data", str(nonzero), "--M", "2", "--out", str(out)]) == 1

    assert not out.exists()


def test_read_branch_csv_skips_blank_lines(tmp_path):
    path = tmp_path / "z.csv"
    path.write_text("0\n\n2\n 3 \n")
    seq = read_branch_csv(str(path))
    assert seq.z.tolist() == [0.0, 2.0, 3.0]


# ----- select -----

def test_select_writes_diagnostics(tmp_path):
    z_path = tmp_path / "z.csv"
    z_path.write_text("\n".join(["0", "1"] * 25 + ["0"]) + "\n")
    out = tmp_path / "diag.json"
    assert main(
        ["select", "--data", str(z_path), "--grid", "1,2", "--out", str(out)]
    ) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"grid", "V", "C", "objective", "chosen"}
    assert doc["grid"] == [1, 2]
    assert doc["chosen"] == 1
    assert doc["V"][1] == "inf"
    assert doc["objective"][1] == "inf"
    assert isinstance(doc["V"][0], float)


def test_select_scope_flag(tmp_path):
    d = _uniform(tmp_path)
    z_path = tmp_path / "z.csv"
    main(
        [
            "simulate", "--density", d, "--n", "200", "--mode", "bpire",
            "--seed", "2", "--out", str(z_path),
        ]
    )
    out = tmp_path / "diag.json"
    assert main(
        [
            "select", "--data", str(z_path), "--grid", "1,2,4",
            "--cn-range", "above", "--out", str(out),
        ]
    ) == 0
    assert json.loads(out.read_text())["chosen"] in (1, 2, 4)
    with pytest.raises(SystemExit) as exc:
        main(
            [
                "select", "--data", str(z_path), "--grid", "1,2",
                "--cn-range", "sideways", "--out", str(out),
            ]
        )
    assert exc.value.code == 2


# ----- oracle -----

def test_oracle_flat_environment(tmp_path):
    d = _uniform(tmp_path)
    out = tmp_path / "oracle.csv"
    assert main(["oracle", "--density", d, "--M", "10", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# density=uniform M=10"
    vals = [float(line.split(",")[3]) for line in lines[2:]]
    assert vals == pytest.approx([1.0] * 11, abs=1e-9)


# ----- experiment -----

def test_experiment_outputs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "density": {"kind": "uniform", "params": {}},
                "n": 60,
                "replications": 3,
                "M_grid": [1, 2],
                "eval_points": 8,
                "gl": True,
            }
        )
    )
    out_dir = tmp_path / "results"
    assert main(
        ["experiment", "--config", str(cfg), "--out-dir", str(out_dir)]
    ) == 0
    said = capsys.readouterr().out
    assert "summary.csv" in said and "losses.csv" in said

    with open(out_dir / "summary.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == SUMMARY_HEADER
    assert len(rows) == 1 + 2 * 8 + 8
    sentinel = [r for r in rows[1:] if r[2] == "-1"]
    assert len(sentinel) == 8
    assert all(len(r) == 11 for r in sentinel)

    with open(out_dir / "losses.csv") as fh:
        loss_rows = list(csv.reader(fh))
    assert loss_rows[0] == ["replication", "M", "sup_error"]
    assert len(loss_rows) == 1 + 3 * 3


def test_experiment_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 60}))
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "ConfigError"


# ----- exit codes and entry point -----

def test_usage_errors_exit_two(tmp_path):
    for argv in (
        [],
        ["simulate", "--density", "x.json"],
        ["estimate", "--data", "z.csv", "--M", "2"],
        ["frobnicate"],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_runtime_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["classify", "--density", str(bad)]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "ParameterError"

    assert main(["classify", "--density", str(tmp_path / "missing.json")]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "OSError"

    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"kind": "cauchy", "params": {}}))
    assert main(["classify", "--density", str(unknown)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ParameterError"
    assert "cauchy" in err["detail"]


def test_console_script_installed(tmp_path):
    exe = shutil.which("rwre")
    assert exe is not None, "console script 'rwre' is not on PATH"
    spec = tmp_path / "d.json"
    spec.write_text(json.dumps({"kind": "beta", "params": {"alpha": 5, "beta": 2}}))
    proc = subprocess.run(
        [exe, "classify", "--density", str(spec)], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["class"] == "transient_right_ballistic"

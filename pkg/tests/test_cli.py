"""Subcommand behavior, exit codes, manifests, and serialization."""

import io
import json
import os
import shutil
import subprocess
import sys
from contextlib import redirect_stdout

import pytest

import raisepeel.scgf as scgf_mod
import raisepeel.stationary as stationary_mod
from raisepeel.cli import main


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def run_json(argv):
    code, out = run_cli(argv)
    return code, json.loads(out)


def strip_timestamps(document):
    document = json.loads(json.dumps(document))
    document["manifest"].pop("started")
    document["manifest"].pop("finished")
    return document


def test_stationary_payload():
    code, doc = run_json(["stationary", "--length", "4", "--integers"])
    assert code == 0
    assert doc["drift_diamond"] == "12/5"
    assert doc["drift_global"] == "1/5"
    assert doc["expected_peaks"] == "8/5"
    assert doc["prob_omega_global"] == "1/5"
    assert doc["integer_sum"] == 10
    assert doc["integer_form"]["0,1,0,1"] == 3
    assert doc["state_count"] == 6
    assert all(doc["checks"].values())
    # exact values are fraction strings, never floats
    assert isinstance(doc["drift_diamond"], str)
    assert isinstance(doc["probabilities"]["2,1,2,3"], str)


def test_manifest_contents():
    code, doc = run_json(["stationary", "--length", "2"])
    manifest = doc["manifest"]
    assert manifest["subcommand"] == "stationary"
    assert manifest["parameters"]["length"] == 2
    assert manifest["version"]
    assert manifest["passed"] is True
    assert manifest["started"] <= manifest["finished"]


def test_tq_lambda_example():
    code, doc = run_json(["tq", "--n", "3", "--check", "lambda"])
    assert code == 0
    block = doc["checks"]["lambda"]
    assert block["alpha"] == "9/70"
    assert block["beta"] == "129/35"
    assert block["passed"] is True


def test_tq_all_checks():
    code, doc = run_json(["tq", "--n", "2"])
    assert code == 0
    assert doc["passed"] is True
    assert set(doc["checks"]) == {"tq", "wronskian", "boundary", "worksheet",
                                  "lambda", "hyper", "recurrences", "bethe"}


def test_xxz_example():
    code, doc = run_json(["xxz", "--length", "6"])
    assert code == 0
    assert doc["ground_energy"] == pytest.approx(-4.5, abs=1e-10)
    assert doc["energy_error"] <= 1e-10
    assert doc["manifest"]["passed"] is True


def test_xxz_bridge_check():
    code, doc = run_json(["xxz", "--length", "4", "--alpha", "0.1",
                          "--beta", "-0.05", "--bridge-check"])
    assert code == 0
    assert doc["bridge_check"]["passed"] is True
    assert doc["bridge_check"]["difference"] <= 1e-8


def test_scgf_fd_check():
    code, doc = run_json(["scgf", "--length", "4", "--fd-check"])
    assert code == 0
    fd = doc["fd_check"]
    assert fd["exact_alpha"] == "1/5"
    assert fd["exact_beta"] == "12/5"
    assert fd["relative_error_alpha"] <= 1e-6
    assert fd["relative_error_beta"] <= 1e-6


def test_simulate_payload_and_determinism():
    argv = ["simulate", "--length", "8", "--time", "200", "--seed", "7"]
    code_a, doc_a = run_json(argv)
    code_b, doc_b = run_json(argv)
    assert code_a == code_b == 0
    assert strip_timestamps(doc_a) == strip_timestamps(doc_b)
    summary = doc_a["summary"]
    assert summary["counters"]["n_total"] > 0
    assert summary["drift_diamond_hat"]["value"] > 0
    assert doc_a["manifest"]["seed"] == 7


def test_simulate_replicas():
    code, doc = run_json(["simulate", "--length", "4", "--time", "100",
                          "--replicas", "3", "--seed", "1"])
    assert code == 0
    assert len(doc["replicas"]) == 3
    assert doc["pooled"]["drift_diamond_hat"]["stderr"] > 0


def test_verify_all_small():
    code, out = run_cli(["verify-all", "--lmax", "4", "--nmax", "2"])
    assert code == 0
    lines = out.splitlines()
    assert any("all" in line and "rows passed" in line for line in lines)
    row_lines = [l for l in lines if "  pass  " in l or "  FAIL  " in l]
    keys = [l.split()[0] for l in row_lines]
    assert keys == sorted(keys)
    assert any("drift-diamond-L04" in k for k in keys)
    # the length-4 row shows the expected fractions
    l4 = next(l for l in row_lines if "drift-diamond-L04" in l)
    assert "12/5" in l4


def test_verify_all_out_file(tmp_path):
    out_path = tmp_path / "report.json"
    code, _ = run_cli(["verify-all", "--lmax", "2", "--nmax", "1",
                       "--out", str(out_path)])
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["failures"] == []
    assert doc["row_count"] == len(doc["rows"])
    assert doc["manifest"]["passed"] is True


def test_out_flag_quiets_stdout(tmp_path):
    out_path = tmp_path / "stationary.json"
    code, out = run_cli(["stationary", "--length", "2", "--out", str(out_path)])
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["drift_diamond"] == "1"


def test_config_defaults_and_override(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"length": 4, "integers": True}))
    code, doc = run_json(["stationary", "--config", str(config)])
    assert code == 0
    assert doc["length"] == 4
    assert "integer_form" in doc
    # explicit flags beat config values
    code, doc = run_json(["stationary", "--config", str(config),
                          "--length", "2"])
    assert doc["length"] == 2


@pytest.mark.parametrize("argv", [
    ["simulate", "--length", "7", "--time", "10"],
    ["simulate", "--length", "4"],
    ["simulate", "--length", "4", "--time", "10", "--events", "5"],
    ["simulate", "--length", "4", "--time", "10", "--log", "x.jsonl"],
    ["stationary", "--length", "3"],
    ["stationary"],
    ["scgf", "--length", "4", "--fd-check", "--step", "0.5"],
    ["tq", "--check", "lambda"],
    ["tq", "--n", "0"],
    ["xxz", "--length", "6", "--beta", "-5.0"],
    ["verify-all", "--lmax", "3"],
    ["no-such-command"],
])
def test_usage_errors_exit_2(argv, capsys):
    code = main(argv)
    capsys.readouterr()
    assert code == 2


def test_odd_length_parity_message(capsys):
    code = main(["simulate", "--length", "7", "--time", "10"])
    err = capsys.readouterr().err
    assert code == 2
    assert "even" in err and "parity" in err


def test_bad_config_exits_2(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"lenth": 4}))
    code = main(["stationary", "--config", str(config)])
    capsys.readouterr()
    assert code == 2
    config.write_text("[1, 2]")
    code = main(["stationary", "--config", str(config)])
    capsys.readouterr()
    assert code == 2


def test_sign_flip_negative_control(monkeypatch, capsys):
    # a build with a flipped sign in one closed form must fail loudly
    original = stationary_mod.peak_mean_formula
    monkeypatch.setattr(stationary_mod, "peak_mean_formula",
                        lambda length: -original(length))
    code = main(["verify-all", "--lmax", "4", "--nmax", "1"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAILED conjecture-peaks-L02" in out
    assert "FAILED conjecture-peaks-L04" in out


def test_convergence_failure_exits_3(monkeypatch, capsys):
    def explode(*args, **kwargs):
        raise scgf_mod.ConvergenceError("iteration stalled")

    monkeypatch.setattr(scgf_mod, "scgf_value", explode)
    code = main(["scgf", "--length", "4"])
    err = capsys.readouterr().err
    assert code == 3
    assert "convergence" in err


def test_memory_failure_exits_3(monkeypatch, capsys):
    def explode(*args, **kwargs):
        raise MemoryError

    monkeypatch.setattr(stationary_mod, "stationary_distribution", explode)
    code = main(["stationary", "--length", "4"])
    capsys.readouterr()
    assert code == 3


def test_module_invocation_and_env_logging():
    env = dict(os.environ, RPM_LOG="info")
    proc = subprocess.run(
        [sys.executable, "-m", "raisepeel.cli", "tq", "--n", "1",
         "--check", "lambda"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"]["lambda"]["alpha"] == "1/2"
    assert "INFO" in proc.stderr


@pytest.mark.skipif(shutil.which("raisepeel") is None,
                    reason="console script not on PATH")
def test_console_script_version():
    proc = subprocess.run(["raisepeel", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("raisepeel ")

"""Command-line contract: subcommands, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from driftest.cli import main

IID_CFG = "kind = iid\nt = 256\nseed = 9\nk = 5\n"


def run_cli(*argv):
    return main(list(argv))


def test_estimate_constant_stream(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    stream.write_text("7\n" * 64)
    out = tmp_path / "est.json"
    assert run_cli("estimate", "--input", str(stream), "--output", str(out),
                   "--delta", "0.05") == 0
    obj = json.loads(out.read_text())
    assert obj["chosen_window"] == 64
    assert obj["estimate"]["atoms"] == [{"symbol": 7, "prob": 1.0}]
    assert "chosen_window=64" in capsys.readouterr().out


def test_estimate_empty_file(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    stream.write_text("")
    assert run_cli("estimate", "--input", str(stream),
                   "--output", str(tmp_path / "o.json")) == 2
    assert "empty sample stream" in capsys.readouterr().err


def test_estimate_negative_sample_names_line(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    stream.write_text("3\n4\n-2\n")
    assert run_cli("estimate", "--input", str(stream),
                   "--output", str(tmp_path / "o.json")) == 2
    assert "line 3" in capsys.readouterr().err


def test_estimate_bad_delta(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    stream.write_text("1\n")
    assert run_cli("estimate", "--input", str(stream),
                   "--output", str(tmp_path / "o.json"), "--delta", "1.5") == 2


def test_estimate_missing_input(tmp_path, capsys):
    assert run_cli("estimate", "--input", str(tmp_path / "nope.txt"),
                   "--output", "-") == 2


def test_estimate_deterministic_bytes(tmp_path):
    stream = tmp_path / "s.txt"
    stream.write_text("1\n2\n1\n2\n2\n1\n1\n2\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("estimate", "--input", str(stream), "--output", str(a)) == 0
    assert run_cli("estimate", "--input", str(stream), "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_row_count_and_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("DRIFTEST_THREADS", "2")
    cfg = tmp_path / "scen.cfg"
    cfg.write_text(IID_CFG)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("simulate", "--scenario", str(cfg), "--trials", "10",
                   "--output", str(a)) == 0
    assert run_cli("simulate", "--scenario", str(cfg), "--trials", "10",
                   "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().splitlines()
    assert len(lines) == 11
    assert lines[0].startswith("trial,scenario,T,delta,")


def test_simulate_seed_override(tmp_path):
    cfg = tmp_path / "scen.cfg"
    cfg.write_text(IID_CFG)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("simulate", "--scenario", str(cfg), "--trials", "4",
                   "--seed", "123", "--output", str(a)) == 0
    assert run_cli("simulate", "--scenario", str(cfg), "--trials", "4",
                   "--output", str(b)) == 0
    assert a.read_bytes() != b.read_bytes()


def test_simulate_unknown_kind(tmp_path, capsys):
    cfg = tmp_path / "scen.cfg"
    cfg.write_text("kind = mystery\nt = 8\nseed = 0\n")
    assert run_cli("simulate", "--scenario", str(cfg), "--output", "-") == 2
    assert "unknown kind" in capsys.readouterr().err


def test_simulate_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "scen.cfg"
    cfg.write_text(IID_CFG + "mystery = 3\n")
    assert run_cli("simulate", "--scenario", str(cfg), "--output", "-") == 2
    assert "unknown key 'mystery'" in capsys.readouterr().err


def test_verify_prop6_passes(capsys):
    assert run_cli("verify", "--suite", "prop6", "--trials", "400") == 0
    out = capsys.readouterr().out
    assert "[prop6]" in out and "PASS" in out and "verify: PASS" in out


def test_verify_metric_passes(capsys):
    assert run_cli("verify", "--suite", "metric", "--trials", "400") == 0


def test_verify_prop2_small(capsys, monkeypatch):
    monkeypatch.setenv("DRIFTEST_THREADS", "1")
    assert run_cli("verify", "--suite", "prop2", "--trials", "60",
                   "--delta", "0.1") == 0
    assert "coverage=" in capsys.readouterr().out


def test_verify_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as err:
        run_cli("verify", "--suite", "prop99")
    assert err.value.code == 2


def test_verify_failure_exits_one(monkeypatch, capsys):
    from driftest import harness

    def broken(pairs, seed=0, tol=1e-12):
        return harness.SuiteReport("prop6", pairs, 3, 0.5)

    monkeypatch.setattr(harness, "verify_prop6", broken)
    assert run_cli("verify", "--suite", "prop6", "--trials", "50") == 1
    assert "verify: FAIL" in capsys.readouterr().out


def test_bench_tiny(capsys):
    assert run_cli("bench", "--t", "1") == 0
    out = capsys.readouterr().out
    assert "elapsed=" in out and "T=1" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "driftest.cli", "bench", "--t", "16"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "elapsed=" in proc.stdout

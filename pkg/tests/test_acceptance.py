"""Acceptance gate: every release criterion at its frozen tolerance.

Each test prints a single pass/fail line; run with ``pytest -v -s`` to see
them all.  Thresholds are fixed here and nowhere else.
"""

import time

import numpy as np

from driftest import run_trials
from driftest.adaptive import adaptive_estimate
from driftest.cli import main as cli_main
from driftest.driftgen import abrupt, iid, linear_drift, sample_stream, zipf_drift
from driftest.harness import (default_families, scaling_experiment,
                              verify_lambda_bounds, verify_metric,
                              verify_prop1, verify_prop2, verify_prop3,
                              verify_prop45, verify_prop6)
from driftest.windows import build_ladder

COVERAGE_SCENARIO = linear_drift(k=10, step_delta=1e-3, t=1024, seed=101)


def report(num, name, ok, detail):
    line = f"[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_complexity_inequalities():
    start = time.perf_counter()
    result = verify_prop6(10_000, seed=1)
    elapsed = time.perf_counter() - start
    ok = result.passed and result.max_slack <= 1e-12 and elapsed < 30.0
    report(1, "complexity pair inequalities",
           ok, f"violations={result.violations} max_slack={result.max_slack:.2e} "
               f"elapsed={elapsed:.1f}s")


def test_criterion_02_complexity_bounds():
    start = time.perf_counter()
    result = verify_lambda_bounds(10_000, seed=2)
    elapsed = time.perf_counter() - start
    ok = result.passed and result.max_slack <= 1e-12 and elapsed < 30.0
    report(2, "support/half-norm/monotone bounds",
           ok, f"violations={result.violations} max_slack={result.max_slack:.2e} "
               f"elapsed={elapsed:.1f}s")


def test_criterion_03_tv_metric_axioms():
    result = verify_metric(10_000, seed=3)
    ok = result.passed and result.max_slack <= 1e-12
    report(3, "total variation metric axioms",
           ok, f"violations={result.violations} max_slack={result.max_slack:.2e}")


def test_criterion_04_single_window_coverage():
    start = time.perf_counter()
    result = verify_prop2(COVERAGE_SCENARIO, 256, 2000, 0.1)
    elapsed = time.perf_counter() - start
    ok = result.passes(0.1) and elapsed < 300.0
    report(4, "single-window bound coverage",
           ok, f"coverage={result.empirical_coverage:.4f} "
               f"threshold={result.threshold(0.1):.4f} elapsed={elapsed:.1f}s")


def test_criterion_05_simultaneous_coverage():
    start = time.perf_counter()
    result = verify_prop3(COVERAGE_SCENARIO, 2000, 0.1)
    elapsed = time.perf_counter() - start
    ok = result.passes(0.1) and elapsed < 600.0
    report(5, "all-windows bound coverage",
           ok, f"coverage={result.empirical_coverage:.4f} "
               f"threshold={result.threshold(0.1):.4f} elapsed={elapsed:.1f}s")


def test_criterion_06_error_decomposition():
    worst = -np.inf
    total_violations = 0
    for scenario in default_families(seed=6):
        result = verify_prop1(scenario, 200, tol=1e-12)
        total_violations += result.violations
        worst = max(worst, result.max_slack)
    ok = total_violations == 0 and worst <= 1e-12
    report(6, "error decomposition and averaging",
           ok, f"violations={total_violations} max_slack={worst:.2e}")


def test_criterion_07_trace_guarantees():
    worst = -np.inf
    total_violations = 0
    total_checks = 0
    total_skipped = 0
    for scenario in default_families(seed=7):
        result = verify_prop45(scenario, 200, 0.05, tol=1e-9)
        total_violations += result.violations
        total_checks += result.checks
        total_skipped += result.skipped
        worst = max(worst, result.max_slack)
    ok = total_violations == 0 and total_checks > 0
    report(7, "continue x5 and stop x2 trace bounds",
           ok, f"checks={total_checks} violations={total_violations} "
               f"skipped={total_skipped} max_slack={worst:.2e}")


def test_criterion_08_competitive_ratio():
    start = time.perf_counter()
    iid_rows = run_trials(iid(k=20, t=4096, seed=8), 200, 0.05)
    iid_ratio = float(np.median([m.err_adaptive / m.err_oracle for m in iid_rows]))
    abrupt_rows = run_trials(abrupt(k=20, change_point=256, t=4096, seed=88),
                             200, 0.05)
    abrupt_ratio = float(np.median(
        [m.err_adaptive / m.err_oracle for m in abrupt_rows]))
    elapsed = time.perf_counter() - start
    ok = iid_ratio <= 5.0 and abrupt_ratio <= 10.0 and elapsed < 600.0
    report(8, "competitive ratio vs oracle",
           ok, f"iid_median={iid_ratio:.2f} (<=5) abrupt_median={abrupt_ratio:.2f} "
               f"(<=10) elapsed={elapsed:.1f}s")


def test_criterion_09_iid_recovery():
    rows = run_trials(iid(k=20, t=4096, seed=9), 200, 0.05)
    frac = float(np.mean([m.chosen_r >= 1024 for m in rows]))
    ok = frac >= 0.8
    report(9, "stationary streams extend the window",
           ok, f"chosen>=T/4 in {frac:.0%} of trials (>=80%)")


def test_criterion_10_scaling_law():
    start = time.perf_counter()
    result = scaling_experiment(10, [1e-4, 3e-4, 1e-3, 3e-3, 1e-2],
                                trials=100, seed=10)
    elapsed = time.perf_counter() - start
    ok = 0.20 <= result.slope <= 0.45 and elapsed < 1800.0
    points = " ".join(f"{p.mean_error:.3f}" for p in result.points)
    report(10, "drift-rate scaling exponent",
           ok, f"slope={result.slope:.3f} in [0.20, 0.45] errors=[{points}] "
               f"elapsed={elapsed:.1f}s")


def test_criterion_11_performance_and_determinism(tmp_path):
    t = 2**20
    stream = sample_stream(zipf_drift(3.0, 3.0, t=t, seed=11), 0)
    start = time.perf_counter()
    build_ladder(stream)
    adaptive_estimate(stream, 0.05)
    elapsed = time.perf_counter() - start

    cfg = tmp_path / "scen.cfg"
    cfg.write_text("kind = abrupt\nt = 512\nseed = 11\nk = 6\nchange_point = 64\n")
    csv_a, csv_b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (csv_a, csv_b):
        assert cli_main(["simulate", "--scenario", str(cfg), "--trials", "20",
                         "--output", str(path)]) == 0
    stream_file = tmp_path / "s.txt"
    stream_file.write_text("\n".join(str(int(x)) for x in stream[:4096]) + "\n")
    json_a, json_b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (json_a, json_b):
        assert cli_main(["estimate", "--input", str(stream_file),
                         "--output", str(path)]) == 0
    identical = (csv_a.read_bytes() == csv_b.read_bytes()
                 and json_a.read_bytes() == json_b.read_bytes())
    ok = elapsed < 1.0 and identical
    report(11, "million-sample estimate under one second, byte-stable outputs",
           ok, f"elapsed={elapsed:.3f}s identical={identical}")

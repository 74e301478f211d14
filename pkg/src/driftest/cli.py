"""Command-line surface: estimate from a file, simulate, verify, benchmark.

Exit codes are a stable scripting contract: 0 success, 1 verification
failure, 2 usage or input error.  Every randomized command accepts --seed
and reproduces byte-identical output for identical invocations.  The
environment variable DRIFTEST_THREADS caps worker parallelism (default:
available cores); parallel runs aggregate deterministically.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time

from . import driftgen, harness
from .adaptive import adaptive_estimate
from .driftgen import DriftScenario, load_scenario
from .windows import build_ladder, load_stream

_SUITES = ("metric", "prop1", "prop2", "prop3", "prop45", "prop6", "all")

_SUITE_TRIALS = {"metric": 10000, "prop1": 200, "prop2": 2000,
                 "prop3": 2000, "prop45": 200, "prop6": 10000}


def _workers() -> int:
    raw = os.environ.get("DRIFTEST_THREADS", "").strip()
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_estimate(args) -> int:
    stream = load_stream(args.input)
    result = adaptive_estimate(stream, args.delta)
    fh, close = _open_out(args.output)
    try:
        fh.write(result.to_json() + "\n")
    finally:
        if close:
            fh.close()
    print(f"estimate: T={stream.size} chosen_window={result.chosen_window} "
          f"stop={result.stop.kind}")
    return 0


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    rows = harness.run_trials(scenario, args.trials, args.delta,
                              workers=_workers())
    fh, close = _open_out(args.output)
    try:
        harness.write_trials_csv(rows, scenario, args.delta, fh)
    finally:
        if close:
            fh.close()
    print(f"simulate: kind={scenario.kind} T={scenario.t} trials={args.trials} "
          f"seed={scenario.seed} -> {args.output}")
    return 0


def _coverage_scenario(seed: int) -> DriftScenario:
    return driftgen.linear_drift(k=10, step_delta=1e-3, t=1024, seed=seed)


def _print_suite(report: harness.SuiteReport) -> bool:
    detail = " ".join(f"{name}={count}" for name, count in report.per_inequality)
    skipped = f" skipped={report.skipped}" if report.skipped else ""
    verdict = "PASS" if report.passed else "FAIL"
    print(f"[{report.name}] checks={report.checks} violations={report.violations} "
          f"max_slack={report.max_slack:.3e} {detail}{skipped} -> {verdict}")
    return report.passed


def _print_coverage(name: str, report: harness.CoverageReport, delta: float) -> bool:
    ok = report.passes(delta)
    detail = " ".join(f"{n}={c}" for n, c in report.per_inequality)
    print(f"[{name}] trials={report.trials} coverage={report.empirical_coverage:.4f} "
          f"threshold={report.threshold(delta):.4f} {detail} "
          f"-> {'PASS' if ok else 'FAIL'}")
    return ok


def _run_suite(suite: str, trials: int | None, delta: float, seed: int) -> bool:
    n = trials if trials is not None else _SUITE_TRIALS[suite]
    workers = _workers()
    if suite == "metric":
        return _print_suite(harness.verify_metric(n, seed=seed))
    if suite == "prop6":
        ok = _print_suite(harness.verify_prop6(n, seed=seed))
        return _print_suite(harness.verify_lambda_bounds(n, seed=seed)) and ok
    if suite == "prop2":
        report = harness.verify_prop2(_coverage_scenario(seed), 256, n, delta,
                                      workers=workers)
        return _print_coverage("prop2", report, delta)
    if suite == "prop3":
        report = harness.verify_prop3(_coverage_scenario(seed), n, delta,
                                      workers=workers)
        return _print_coverage("prop3", report, delta)
    ok = True
    for scenario in harness.default_families(seed):
        if suite == "prop1":
            report = harness.verify_prop1(scenario, n, workers=workers)
        else:
            report = harness.verify_prop45(scenario, n, delta, workers=workers)
        report = harness.SuiteReport(
            f"{suite}:{scenario.kind}", report.checks, report.violations,
            report.max_slack, report.per_inequality, report.skipped)
        ok = _print_suite(report) and ok
    return ok


def cmd_verify(args) -> int:
    suites = [s for s in _SUITES if s != "all"] if args.suite == "all" else [args.suite]
    ok = True
    for suite in suites:
        ok = _run_suite(suite, args.trials, args.delta, args.seed) and ok
    print("verify: PASS" if ok else "verify: FAIL")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    if args.t < 1:
        raise ValueError("--t must be >= 1")
    scenario = driftgen.zipf_drift(3.0, 3.0, t=args.t, seed=args.seed)
    stream = driftgen.sample_stream(scenario, trial=0)
    start = time.perf_counter()
    ladder = build_ladder(stream)
    result = adaptive_estimate(stream, args.delta)
    elapsed = time.perf_counter() - start
    supports = [w.symbols.size for w in ladder.windows]
    print(f"bench: T={args.t} elapsed={elapsed:.4f}s "
          f"chosen_window={result.chosen_window} "
          f"peak_window_support={max(supports)} "
          f"ladder_supports={supports}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftest",
        description="Estimate the current distribution of a drifting discrete stream.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate from a sample-stream file")
    p.add_argument("--input", required=True, help="sample stream, one integer per line")
    p.add_argument("--output", required=True, help="estimate JSON path ('-' for stdout)")
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("simulate", help="run seeded trials of a drift scenario")
    p.add_argument("--scenario", required=True, help="scenario config path")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None,
                   help="override the scenario file's seed")
    p.add_argument("--output", required=True, help="trial CSV path ('-' for stdout)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True, choices=_SUITES)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="time the estimator on a long stream")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"driftest: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Run scaled-down versions of the verification suites.

The full campaigns live in the acceptance tests and the `driftest verify`
command; this is the same machinery with small trial counts so the run
finishes in seconds.
"""

from driftest.driftgen import linear_drift
from driftest.harness import (default_families, verify_lambda_bounds,
                              verify_metric, verify_prop1, verify_prop2,
                              verify_prop3, verify_prop45, verify_prop6)

DELTA = 0.1
coverage_scenario = linear_drift(k=10, step_delta=1e-3, t=1024, seed=0)

print("algebraic campaigns (zero violations expected):")
for rep in (verify_metric(2000, seed=1),
            verify_prop6(2000, seed=2),
            verify_lambda_bounds(2000, seed=3)):
    print(f"  {rep.name:14s} checks={rep.checks:6d} violations={rep.violations} "
          f"max_slack={rep.max_slack:.2e}")

print("\ncoverage of the high-probability bounds (floor = 1 - delta - 3 SE):")
prop2 = verify_prop2(coverage_scenario, 256, 400, DELTA)
prop3 = verify_prop3(coverage_scenario, 400, DELTA)
print(f"  single window   coverage={prop2.empirical_coverage:.4f} "
      f"floor={prop2.threshold(DELTA):.4f}")
print(f"  all windows     coverage={prop3.empirical_coverage:.4f} "
      f"floor={prop3.threshold(DELTA):.4f}")

print("\nper-trace guarantees across all scenario families:")
for scenario in default_families(seed=4):
    decomp = verify_prop1(scenario, 40)
    traces = verify_prop45(scenario, 40, 0.05)
    print(f"  {scenario.kind:17s} decomposition_violations={decomp.violations} "
          f"trace_checks={traces.checks:5d} trace_violations={traces.violations}")

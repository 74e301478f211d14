"""Tour of the drift-scenario families and their exact drift curves.

Every scenario exposes its true distribution at each step, so the drift
error of any window size is known exactly; that is what makes the Monte
Carlo verification suites possible.
"""

from driftest.driftgen import (abrupt, geometric_drift, iid, linear_drift,
                               rotating_support, sample_stream,
                               scenario_delta, true_pmf, zipf_drift)

scenarios = [
    iid(k=4, t=512, seed=1),
    linear_drift(k=10, step_delta=1e-3, t=512, seed=2),
    abrupt(k=6, change_point=64, t=512, seed=3),
    rotating_support(k=4, period=128, t=512, seed=4),
    geometric_drift(0.3, 0.5, t=512, seed=5),
    zipf_drift(5.0, 4.0, t=512, seed=6),
]

for scenario in scenarios:
    final = true_pmf(scenario, scenario.t)
    stream = sample_stream(scenario, trial=0)
    deltas = {r: scenario_delta(scenario, r) for r in (1, 16, 64, 256, 512)}
    print(f"== {scenario.kind}")
    print(f"   final support size: {final.support_size}, "
          f"largest atom: {final.probs.max():.4f}")
    print(f"   drift error by window size: "
          + "  ".join(f"r={r}: {d:.4f}" for r, d in deltas.items()))
    print(f"   last 12 samples: {stream[-12:].tolist()}")

# the linear family moves mass at an exact per-step rate, so its drift
# curve is a straight line until it saturates
s = linear_drift(k=10, step_delta=5e-3, t=512, seed=9)
print("\nlinear drift curve (rate 0.005/step):")
for r in (1, 11, 51, 101, 201, 401):
    print(f"   r={r:4d}  drift={scenario_delta(s, r):.4f}  "
          f"(r-1)*rate={min((r - 1) * 5e-3, 1.0):.4f}")

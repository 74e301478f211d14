"""Monte Carlo experiment runner and verifier for the estimator's guarantees.

Coverage suites replay a scenario many times and count how often the
high-probability inequalities hold; property campaigns hammer the purely
algebraic inequalities with random pmfs; trial runs compare the adaptive
estimator against fixed-window baselines and the simulation-only oracle;
the scaling study fits the error-vs-drift-rate exponent.

Everything is deterministic given (scenario, seed, trials, delta): trials
derive their generator state from the trial index alone, so results do not
depend on worker parallelism, and aggregation preserves trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import driftgen
from .adaptive import adaptive_estimate, q_curve, realized_error_curve
from .dist import (EmpiricalWindow, Pmf, half_norm, lambda_complexity,
                   phi_empirical, tv_distance)
from .driftgen import (DriftScenario, linear_drift, sample_stream,
                       scenario_delta_curve, segments, truth_pmfs)
from .windows import (build_ladder, concentration_radius, dyadic_depth,
                      ladder_xis)

CSV_HEADER = ("trial,scenario,T,delta,chosen_r,err_adaptive,err_oracle,"
              "r_oracle,err_full,err_last,q_star,r_star,prop3_held")

# horizon multiple of the ideal window size used by the scaling study
SCALING_HORIZON_FACTOR = 8
_SCALING_MIN_HORIZON = 64


@dataclass(frozen=True)
class TrialMetrics:
    """Errors and diagnostics of one simulated trial."""

    trial: int
    chosen_r: int
    err_adaptive: float
    err_oracle: float
    r_oracle: int
    err_full_window: float
    err_last_sample: float
    q_star: float
    r_star: int
    prop3_held: bool


@dataclass(frozen=True)
class CoverageReport:
    """How often a high-probability event held over repeated trials."""

    trials: int
    violations: int
    per_inequality: tuple[tuple[str, int], ...]

    @property
    def empirical_coverage(self) -> float:
        return 1.0 - self.violations / self.trials

    def threshold(self, delta: float) -> float:
        """Acceptance floor: 1 - delta minus three binomial standard errors."""
        return (1.0 - delta) - 3.0 * math.sqrt(delta * (1.0 - delta) / self.trials)

    def passes(self, delta: float) -> bool:
        return self.empirical_coverage >= self.threshold(delta)

    def to_json_obj(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "empirical_coverage": self.empirical_coverage,
            "per_inequality": {name: count for name, count in self.per_inequality},
        }


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of an exact-inequality campaign (zero violations expected)."""

    name: str
    checks: int
    violations: int
    max_slack: float
    per_inequality: tuple[tuple[str, int], ...] = ()
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "checks": self.checks,
            "violations": self.violations,
            "max_slack": self.max_slack,
            "per_inequality": {name: count for name, count in self.per_inequality},
            "skipped": self.skipped,
        }


@dataclass(frozen=True)
class ScalingPoint:
    step_delta: float
    horizon: int
    mean_error: float


@dataclass(frozen=True)
class ScalingResult:
    points: tuple[ScalingPoint, ...]
    slope: float
    intercept: float


def default_families(seed: int = 0) -> list[DriftScenario]:
    """One scenario per drift family, sized so every code path is exercised.

    The abrupt entry is large enough that the stop test actually fires,
    which is what gives the stop-side trace assertions real coverage.
    """
    return [
        driftgen.iid(k=20, t=2048, seed=seed),
        driftgen.linear_drift(k=10, step_delta=1e-3, t=1024, seed=seed),
        driftgen.abrupt(k=10, change_point=8192, t=32768, seed=seed),
        driftgen.rotating_support(k=8, period=300, t=2048, seed=seed),
        driftgen.geometric_drift(0.3, 0.45, t=512, seed=seed),
        driftgen.zipf_drift(5.0, 4.5, t=512, seed=seed),
    ]


# --- truth-side precomputation (one per scenario, trial-independent) -------


def _suffix_average(scenario: DriftScenario, r: int) -> Pmf:
    """Mean of the most recent r true pmfs, via the run-length segments."""
    remaining = r
    parts: list[tuple[int, Pmf]] = []
    for count, pmf in reversed(segments(scenario)):
        take = min(count, remaining)
        parts.append((take, pmf))
        remaining -= take
        if remaining == 0:
            break
    union = np.unique(np.concatenate([p.symbols for _, p in parts]))
    acc = np.zeros(union.size)
    for take, pmf in parts:
        acc[np.searchsorted(union, pmf.symbols)] += (take / r) * pmf.probs
    return Pmf(union, acc)


@dataclass(frozen=True, eq=False)
class _TruthSide:
    current: Pmf
    depth: int
    window_averages: tuple[Pmf, ...]
    window_lambdas: tuple[float, ...]
    window_deltas: tuple[float, ...]
    q_star: float
    r_star: int


@lru_cache(maxsize=32)
def _truth_side(scenario: DriftScenario, delta: float) -> _TruthSide:
    truth = truth_pmfs(scenario)
    depth = dyadic_depth(scenario.t)
    averages = tuple(_suffix_average(scenario, 2**j) for j in range(depth + 1))
    lambdas = tuple(lambda_complexity(averages[j], 2**j) for j in range(depth + 1))
    delta_curve = scenario_delta_curve(scenario)
    window_deltas = tuple(float(delta_curve[2**j - 1]) for j in range(depth + 1))
    q = q_curve(truth, delta)
    r_star = len(q) - int(np.argmin(q[::-1]))
    return _TruthSide(truth[-1], depth, averages, lambdas, window_deltas,
                      float(q[r_star - 1]), r_star)


def _prop3_held(ladder, delta: float, side: _TruthSide) -> tuple[bool, bool]:
    """Whether each simultaneous inequality held for every dyadic window."""
    emp_ok = True
    true_ok = True
    for j, w in enumerate(ladder.windows):
        radius = concentration_radius(j, delta)
        phi = phi_empirical(w)
        if tv_distance(w, side.window_averages[j]) > phi + radius:
            emp_ok = False
        if phi > 4.0 * side.window_lambdas[j] + radius:
            true_ok = False
        if not (emp_ok or true_ok):
            break
    return emp_ok, true_ok


def _argmin_prefer_large(values: np.ndarray) -> int:
    """Index of the minimum, ties resolved toward the largest index."""
    return values.size - 1 - int(np.argmin(values[::-1]))


# --- trial runs -------------------------------------------------------------


def _metrics_block(scenario: DriftScenario, delta: float,
                   lo: int, hi: int) -> list[TrialMetrics]:
    side = _truth_side(scenario, delta)
    out = []
    for trial in range(lo, hi):
        stream = sample_stream(scenario, trial)
        result = adaptive_estimate(stream, delta)
        errs = realized_error_curve(stream, side.current)
        r_oracle = _argmin_prefer_large(errs) + 1
        ladder = build_ladder(stream)
        emp_ok, true_ok = _prop3_held(ladder, delta, side)
        out.append(TrialMetrics(
            trial=trial,
            chosen_r=result.chosen_window,
            err_adaptive=float(errs[result.chosen_window - 1]),
            err_oracle=float(errs[r_oracle - 1]),
            r_oracle=r_oracle,
            err_full_window=float(errs[-1]),
            err_last_sample=float(errs[0]),
            q_star=side.q_star,
            r_star=side.r_star,
            prop3_held=emp_ok and true_ok,
        ))
    return out


def run_trials(scenario: DriftScenario, trials: int, delta: float,
               workers: int = 1) -> list[TrialMetrics]:
    """Run seeded trials of the estimator with all baselines and diagnostics."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    blocks = _fan_out(_metrics_block, (scenario, delta), trials, workers)
    return [m for block in blocks for m in block]


def write_trials_csv(rows: Sequence[TrialMetrics], scenario: DriftScenario,
                     delta: float, fh) -> None:
    """Fixed-header CSV; floats use shortest round-trip formatting."""
    fh.write(CSV_HEADER + "\n")
    for m in rows:
        fh.write(",".join([
            str(m.trial), scenario.kind, str(scenario.t), repr(float(delta)),
            str(m.chosen_r), repr(m.err_adaptive), repr(m.err_oracle),
            str(m.r_oracle), repr(m.err_full_window), repr(m.err_last_sample),
            repr(m.q_star), str(m.r_star),
            "true" if m.prop3_held else "false",
        ]) + "\n")


# --- coverage suites --------------------------------------------------------


def _prop2_block(scenario: DriftScenario, r: int, delta: float,
                 lo: int, hi: int) -> np.ndarray:
    average = _suffix_average(scenario, r)
    lam_avg = lambda_complexity(average, r)
    bound1_extra = 3.0 * math.sqrt(math.log(4.0 / delta) / (2.0 * r))
    bound2 = 4.0 * lam_avg + math.sqrt(math.log(4.0 / delta) / r)
    fails = np.zeros(3, dtype=np.int64)  # ineq1, ineq2, conjunction
    for trial in range(lo, hi):
        stream = sample_stream(scenario, trial)
        window = EmpiricalWindow.from_samples(stream[scenario.t - r:])
        phi = phi_empirical(window)
        bad1 = tv_distance(window, average) > phi + bound1_extra
        bad2 = phi > bound2
        fails += (bad1, bad2, bad1 or bad2)
    return fails


def verify_prop2(scenario: DriftScenario, r: int, trials: int, delta: float,
                 workers: int = 1) -> CoverageReport:
    """Coverage of the single-window statistical-error bounds at size r."""
    if r < 1 or r > scenario.t or (r & (r - 1)) != 0:
        raise ValueError("r must be a power of two within the horizon")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    blocks = _fan_out(_prop2_block, (scenario, r, delta), trials, workers)
    fails = np.sum(blocks, axis=0)
    return CoverageReport(trials, int(fails[2]), (
        ("deviation_bound", int(fails[0])),
        ("complexity_bound", int(fails[1])),
    ))


def _prop3_block(scenario: DriftScenario, delta: float,
                 lo: int, hi: int) -> np.ndarray:
    side = _truth_side(scenario, delta)
    fails = np.zeros(3, dtype=np.int64)
    for trial in range(lo, hi):
        ladder = build_ladder(sample_stream(scenario, trial))
        emp_ok, true_ok = _prop3_held(ladder, delta, side)
        fails += (not emp_ok, not true_ok, not (emp_ok and true_ok))
    return fails


def verify_prop3(scenario: DriftScenario, trials: int, delta: float,
                 workers: int = 1) -> CoverageReport:
    """Coverage of the all-windows-simultaneously statistical-error bounds."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    blocks = _fan_out(_prop3_block, (scenario, delta), trials, workers)
    fails = np.sum(blocks, axis=0)
    return CoverageReport(trials, int(fails[2]), (
        ("deviation_bound", int(fails[0])),
        ("complexity_bound", int(fails[1])),
    ))


# --- exact-inequality campaigns ---------------------------------------------


def _prop1_block(scenario: DriftScenario, tol: float,
                 lo: int, hi: int) -> tuple[int, int, float]:
    side = _truth_side(scenario, 0.5)
    checks = 0
    violations = 0
    max_slack = -math.inf
    for trial in range(lo, hi):
        ladder = build_ladder(sample_stream(scenario, trial))
        for j, w in enumerate(ladder.windows):
            lhs = tv_distance(side.current, w)
            rhs = tv_distance(side.window_averages[j], w) + side.window_deltas[j]
            slack = lhs - rhs
            checks += 1
            max_slack = max(max_slack, slack)
            if slack > tol:
                violations += 1
    return checks, violations, max_slack


def verify_prop1(scenario: DriftScenario, trials: int,
                 tol: float = 1e-12, workers: int = 1) -> SuiteReport:
    """Error decomposition: estimation error <= statistical error + drift error.

    Also checks the averaging inequality (window average within drift error
    of the current pmf), which depends only on the truth sequence.
    """
    side = _truth_side(scenario, 0.5)
    avg_checks = 0
    avg_violations = 0
    max_slack = -math.inf
    for j in range(side.depth + 1):
        slack = tv_distance(side.window_averages[j], side.current) - side.window_deltas[j]
        avg_checks += 1
        max_slack = max(max_slack, slack)
        if slack > tol:
            avg_violations += 1
    blocks = _fan_out(_prop1_block, (scenario, tol), trials, workers)
    checks = avg_checks + sum(b[0] for b in blocks)
    decomp_violations = sum(b[1] for b in blocks)
    max_slack = max(max_slack, max(b[2] for b in blocks))
    return SuiteReport("prop1", checks, decomp_violations + avg_violations,
                       max_slack, (
                           ("decomposition", decomp_violations),
                           ("averaging", avg_violations),
                       ))


def _prop45_block(scenario: DriftScenario, delta: float, tol: float,
                  lo: int, hi: int) -> tuple[int, int, int, int, float]:
    side = _truth_side(scenario, delta)
    checks = 0
    viol4 = 0
    viol5 = 0
    skipped = 0
    max_slack = -math.inf
    for trial in range(lo, hi):
        stream = sample_stream(scenario, trial)
        ladder = build_ladder(stream)
        emp_ok, true_ok = _prop3_held(ladder, delta, side)
        if not (emp_ok and true_ok):
            skipped += 1
            continue
        xis = ladder_xis(ladder, delta)
        result = adaptive_estimate(stream, delta)
        bounds = [xis[j] + side.window_deltas[j] for j in range(side.depth + 1)]
        # continue condition: every accepted window beyond the first is
        # within five times the best bound among the earlier accepted ones
        best = math.inf
        for cand in result.accepted:
            if best < math.inf:
                lhs = tv_distance(side.current, ladder[cand.index])
                slack = lhs - 5.0 * best
                checks += 1
                max_slack = max(max_slack, slack)
                if slack > tol:
                    viol4 += 1
            best = min(best, bounds[cand.index])
        # stop condition: the flagged accepted window stays within twice the
        # bound of every window at least as large as the rejected candidate
        if result.stop.kind == "violation":
            u_l = bounds[result.stop.l]
            for n in range(result.stop.j, side.depth + 1):
                slack = u_l - 2.0 * bounds[n]
                checks += 1
                max_slack = max(max_slack, slack)
                if slack > tol:
                    viol5 += 1
    return checks, viol4, viol5, skipped, max_slack


def verify_prop45(scenario: DriftScenario, trials: int, delta: float,
                  tol: float = 1e-9, workers: int = 1) -> SuiteReport:
    """Trace assertions for the continue (x5) and stop (x2) guarantees.

    Trials where the simultaneous-bounds event failed are excluded, since
    both guarantees are conditional on it.
    """
    blocks = _fan_out(_prop45_block, (scenario, delta, tol), trials, workers)
    checks = sum(b[0] for b in blocks)
    viol4 = sum(b[1] for b in blocks)
    viol5 = sum(b[2] for b in blocks)
    skipped = sum(b[3] for b in blocks)
    max_slack = max(b[4] for b in blocks)
    return SuiteReport("prop45", checks, viol4 + viol5, max_slack, (
        ("continue_factor5", viol4),
        ("stop_factor2", viol5),
    ), skipped=skipped)


def random_pmf(rng: np.random.Generator, max_support: int = 64) -> Pmf:
    """Random sparse pmf mixing flat, spiky, and tiny-atom shapes."""
    k = int(rng.integers(1, max_support + 1))
    style = int(rng.integers(0, 4))
    if style == 0:
        weights = rng.dirichlet(np.ones(k))
    elif style == 1:
        weights = rng.dirichlet(np.full(k, 0.15))
    elif style == 2:
        weights = np.power(rng.uniform(0.3, 0.95), np.arange(k))
    else:
        weights = rng.dirichlet(np.ones(k))
        tiny = rng.random(k) < 0.4
        weights[tiny] *= 10.0 ** rng.uniform(-9, -2, size=k)[tiny]
    weights = np.asarray(weights, dtype=np.float64)
    weights = weights[weights > 0]
    if weights.size == 0:
        weights = np.ones(1)
    weights /= np.sum(weights)
    weights[int(np.argmax(weights))] += 1.0 - float(np.sum(weights))
    symbols = np.sort(rng.choice(4 * max_support, size=weights.size, replace=False))
    return Pmf(symbols.astype(np.int64), weights)


def _perturbed_pair(rng: np.random.Generator) -> tuple[Pmf, Pmf]:
    p = random_pmf(rng)
    if rng.random() < 0.5:
        return p, random_pmf(rng)
    # nearby pmf: rescale some atoms, renormalize
    weights = p.probs * np.exp(rng.normal(0.0, 0.3, size=p.probs.size))
    weights /= np.sum(weights)
    weights[int(np.argmax(weights))] += 1.0 - float(np.sum(weights))
    return p, Pmf(p.symbols.copy(), weights)


def verify_prop6(pairs: int, seed: int = 0, tol: float = 1e-12) -> SuiteReport:
    """Random-pmf campaign for the two complexity-functional inequalities.

    For random pmfs and random window sizes r <= s: the functional is
    2-Lipschitz in total variation, and shrinking the budget from s to r
    inflates it by at most sqrt(s/r).
    """
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    rng = np.random.default_rng(seed)
    viol_lipschitz = 0
    viol_ratio = 0
    max_slack = -math.inf
    for _ in range(pairs):
        p, q = _perturbed_pair(rng)
        r, s = np.sort(rng.integers(1, 2**16 + 1, size=2))
        r, s = int(r), int(s)
        slack = (abs(lambda_complexity(p, r) - lambda_complexity(q, r))
                 - 2.0 * tv_distance(p, q))
        max_slack = max(max_slack, slack)
        if slack > tol:
            viol_lipschitz += 1
        slack = lambda_complexity(p, r) - math.sqrt(s / r) * lambda_complexity(p, s)
        max_slack = max(max_slack, slack)
        if slack > tol:
            viol_ratio += 1
    return SuiteReport("prop6", 2 * pairs, viol_lipschitz + viol_ratio, max_slack, (
        ("tv_lipschitz", viol_lipschitz),
        ("budget_ratio", viol_ratio),
    ))


def verify_lambda_bounds(instances: int, seed: int = 0,
                         tol: float = 1e-12) -> SuiteReport:
    """Support bound, half-norm bound, and monotonicity of the complexity."""
    if instances < 1:
        raise ValueError("instances must be >= 1")
    rng = np.random.default_rng(seed)
    names = ("support_bound", "half_norm_bound", "monotone")
    viols = [0, 0, 0]
    max_slack = -math.inf
    for _ in range(instances):
        p = random_pmf(rng)
        r, s = np.sort(rng.integers(1, 2**16 + 1, size=2))
        r, s = int(r), int(s)
        lam_s = lambda_complexity(p, s)
        slacks = (
            lam_s - math.sqrt(p.support_size / s),
            lam_s - math.sqrt(half_norm(p) / s),
            lam_s - lambda_complexity(p, r),
        )
        for i, slack in enumerate(slacks):
            max_slack = max(max_slack, slack)
            if slack > tol:
                viols[i] += 1
    return SuiteReport("lambda_bounds", 3 * instances, sum(viols), max_slack,
                       tuple(zip(names, viols)))


def verify_metric(triples: int, seed: int = 0, tol: float = 1e-12) -> SuiteReport:
    """Total variation is a metric: identity, symmetry, triangle, range."""
    if triples < 1:
        raise ValueError("triples must be >= 1")
    rng = np.random.default_rng(seed)
    names = ("identity", "symmetry", "triangle", "range")
    viols = [0, 0, 0, 0]
    max_slack = -math.inf
    for _ in range(triples):
        p = random_pmf(rng)
        q = random_pmf(rng)
        m = random_pmf(rng)
        pq = tv_distance(p, q)
        slacks = (
            tv_distance(p, p),
            abs(pq - tv_distance(q, p)),
            pq - (tv_distance(p, m) + tv_distance(m, q)),
            max(-pq, pq - 1.0),
        )
        for i, slack in enumerate(slacks):
            max_slack = max(max_slack, slack)
            if slack > tol:
                viols[i] += 1
    return SuiteReport("metric", 4 * triples, sum(viols), max_slack,
                       tuple(zip(names, viols)))


# --- scaling study ----------------------------------------------------------


def scaling_horizon(k: int, step_delta: float) -> int:
    """Horizon for one scaling point: a fixed multiple of the ideal window."""
    if step_delta <= 0.0:
        raise ValueError("step_delta must be positive for the scaling study")
    ideal = (k / step_delta**2) ** (1.0 / 3.0)
    horizon = int(round(SCALING_HORIZON_FACTOR * ideal))
    if horizon < _SCALING_MIN_HORIZON:
        raise ValueError(
            f"step_delta {step_delta} gives horizon {horizon}, too small "
            f"for the asymptotic regime (need >= {_SCALING_MIN_HORIZON})")
    return horizon


def _scaling_block(scenario: DriftScenario, delta: float,
                   lo: int, hi: int) -> float:
    current = truth_pmfs(scenario)[-1]
    total = 0.0
    for trial in range(lo, hi):
        stream = sample_stream(scenario, trial)
        result = adaptive_estimate(stream, delta)
        total += tv_distance(current, result.estimate)
    return total


def scaling_experiment(k: int, deltas: Sequence[float], trials: int,
                       delta: float = 0.05, seed: int = 0,
                       workers: int = 1) -> ScalingResult:
    """Mean adaptive error across drift rates, with a log-log slope fit.

    Each drift rate gets its own horizon via ``scaling_horizon`` so that
    the ideal window sits well inside the ladder while the drift is still
    active at estimation time.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if len(deltas) < 2:
        raise ValueError("need at least two drift rates to fit a slope")
    points = []
    for step_delta in deltas:
        horizon = scaling_horizon(k, step_delta)
        scenario = linear_drift(k, step_delta, horizon, seed=seed)
        blocks = _fan_out(_scaling_block, (scenario, delta), trials, workers)
        points.append(ScalingPoint(step_delta, horizon, sum(blocks) / trials))
    xs = np.log10([p.step_delta for p in points])
    ys = np.log10([p.mean_error for p in points])
    slope, intercept = np.polyfit(xs, ys, 1)
    return ScalingResult(tuple(points), float(slope), float(intercept))


def write_scaling_data(result: ScalingResult, fh) -> None:
    """Two-column data file: log10 drift rate, log10 mean error."""
    fh.write("# log10_delta log10_error\n")
    for p in result.points:
        fh.write(f"{repr(math.log10(p.step_delta))} {repr(math.log10(p.mean_error))}\n")


# --- worker fan-out ---------------------------------------------------------


def _fan_out(fn: Callable, common: tuple, trials: int, workers: int) -> list:
    """Split trials [0, n) into contiguous blocks, preserving block order."""
    if workers <= 1:
        return [fn(*common, 0, trials)]
    workers = min(workers, trials)
    edges = np.linspace(0, trials, workers + 1, dtype=int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *common, int(lo), int(hi))
                   for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
        return [f.result() for f in futures]

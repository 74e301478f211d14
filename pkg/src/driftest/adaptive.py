"""Adaptive window selection over the dyadic ladder, with baselines.

The estimator walks the dyadic windows from small to large, keeping a list
of candidates whose statistical-error bounds strictly decrease.  Before a
new candidate is accepted, its empirical distribution is compared with
every accepted window: a total variation gap of at least three times the
old bound plus the new bound certifies that real drift separates the two
windows, so extending further cannot help and the walk stops.  The
returned estimate is always the largest accepted window.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dist import (EmpiricalWindow, Pmf, lambda_complexity, phi_empirical,
                   support_and_mass, tv_distance)
from .windows import (UNION_BOUND_CONSTANT, as_stream, build_ladder,
                      union_log_weight, xi_bound)


@dataclass(frozen=True)
class CandidateRecord:
    """One dyadic window accepted into the candidate list."""

    index: int
    size: int
    phi: float
    xi: float

    def __post_init__(self):
        if self.size != 2**self.index:
            raise ValueError("candidate size must be 2**index")
        if self.xi < self.phi:
            raise ValueError("xi must dominate phi")


@dataclass(frozen=True)
class Comparison:
    """One evaluation of the stop test between accepted window l and candidate j."""

    l: int
    j: int
    tv: float
    threshold: float


@dataclass(frozen=True)
class StopReason:
    kind: str  # "exhausted" or "violation"
    j: int | None = None
    l: int | None = None

    def to_json_obj(self) -> dict:
        if self.kind == "exhausted":
            return {"kind": "exhausted"}
        return {"kind": "violation", "j": self.j, "l": self.l}


@dataclass(frozen=True, eq=False)
class EstimateResult:
    """Chosen window, its estimate, and the full decision trace."""

    chosen_window: int
    estimate: Pmf
    accepted: tuple[CandidateRecord, ...]
    stop: StopReason
    comparisons: tuple[Comparison, ...]

    def to_json_obj(self) -> dict:
        return {
            "chosen_window": self.chosen_window,
            "estimate": self.estimate.to_json_obj(),
            "accepted": [{"j": c.index, "r": c.size, "phi": c.phi, "xi": c.xi}
                         for c in self.accepted],
            "stop": self.stop.to_json_obj(),
            "comparisons": [{"l": c.l, "j": c.j, "tv": c.tv, "threshold": c.threshold}
                            for c in self.comparisons],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def adaptive_estimate(stream, delta: float) -> EstimateResult:
    """Estimate the current distribution of a drifting stream.

    Deterministic in (stream, delta).  The candidate list starts at window
    index 0; index j is considered only when its bound is strictly below
    every accepted bound; the stop test uses >= so boundary equality stops.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    ladder = build_ladder(stream)
    xis = [xi_bound(w, j, delta) for j, w in enumerate(ladder.windows)]

    def record(j: int) -> CandidateRecord:
        return CandidateRecord(j, 2**j, phi_empirical(ladder[j]), xis[j])

    accepted = [record(0)]
    comparisons: list[Comparison] = []
    stop = StopReason("exhausted")

    for j in range(1, ladder.depth + 1):
        if not xis[j] < min(c.xi for c in accepted):
            continue
        violated = False
        for cand in accepted:
            gap = tv_distance(ladder[cand.index], ladder[j])
            threshold = 3.0 * cand.xi + xis[j]
            comparisons.append(Comparison(cand.index, j, gap, threshold))
            if gap >= threshold:
                stop = StopReason("violation", j=j, l=cand.index)
                violated = True
                break
        if violated:
            break
        accepted.append(record(j))

    chosen = accepted[-1]
    return EstimateResult(
        chosen_window=chosen.size,
        estimate=ladder[chosen.index].to_pmf(),
        accepted=tuple(accepted),
        stop=stop,
        comparisons=tuple(comparisons),
    )


def fixed_window_estimate(stream, r: int) -> Pmf:
    """Empirical distribution of the most recent r samples."""
    arr = as_stream(stream)
    if not 1 <= r <= arr.size:
        raise ValueError(f"window size {r} outside [1, {arr.size}]")
    return EmpiricalWindow.from_samples(arr[arr.size - r:]).to_pmf()


def drift_sequence(truth: Sequence[Pmf]) -> np.ndarray:
    """Drift-error sequence of a truth sequence, one value per window size.

    Entry r-1 is the largest total variation distance from the final
    distribution to any of the r most recent ones; starts at 0 and never
    decreases.  Repeated pmf objects (piecewise-constant sequences) are
    measured once.
    """
    if len(truth) == 0:
        raise ValueError("truth sequence must be non-empty")
    current = truth[-1]
    cache: dict[int, float] = {}
    deltas = np.empty(len(truth))
    running = 0.0
    for age, pmf in enumerate(reversed(truth)):
        key = id(pmf)
        if key not in cache:
            cache[key] = tv_distance(current, pmf)
        running = max(running, cache[key])
        deltas[age] = running
    return deltas


def u_bound(j: int, xi: float, truth: Sequence[Pmf]) -> float:
    """Estimation-error bound of dyadic window j: its xi plus its drift error."""
    r = 2**j
    if len(truth) < r:
        raise ValueError(f"truth covers {len(truth)} steps, window needs {r}")
    return xi + float(drift_sequence(truth)[r - 1])


def lambda_curve(p: Pmf, rs: np.ndarray) -> np.ndarray:
    """lambda_complexity(p, r) evaluated for every r in rs, vectorized."""
    rs = np.asarray(rs, dtype=np.float64)
    order = np.argsort(p.probs, kind="stable")
    w = p.probs[order]
    prefix_mass = np.concatenate([[0.0], np.cumsum(w)])
    sqrt_w = np.sqrt(w)
    suffix_root = np.concatenate([[0.0], np.cumsum(sqrt_w[::-1])])[::-1]
    # first index whose mass is >= 1/r
    idx = np.searchsorted(w, 1.0 / rs, side="left")
    return prefix_mass[idx] + suffix_root[idx] / np.sqrt(rs)


def q_curve(truth: Sequence[Pmf], delta: float) -> np.ndarray:
    """Idealized selection objective over all window sizes 1..T.

    Complexity of the final distribution at budget r, plus the
    union-weighted deviation term, plus the drift error at r.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    t = len(truth)
    rs = np.arange(1, t + 1, dtype=np.float64)
    lam = lambda_curve(truth[-1], rs)
    lg = np.log2(rs)
    log_weights = np.log(UNION_BOUND_CONSTANT * (lg * lg + 1.0) / delta)
    return lam + np.sqrt(log_weights / rs) + drift_sequence(truth)


def q_value(r: int, truth: Sequence[Pmf], delta: float) -> float:
    """One point of the selection objective."""
    if not 1 <= r <= len(truth):
        raise ValueError(f"window size {r} outside [1, {len(truth)}]")
    lam = lambda_complexity(truth[-1], r)
    dev = math.sqrt(union_log_weight(r, delta) / r)
    return lam + dev + float(drift_sequence(truth)[r - 1])


def q_argmin(truth: Sequence[Pmf], delta: float) -> tuple[int, float]:
    """Minimizer of the selection objective; ties go to the larger window."""
    q = q_curve(truth, delta)
    best = len(q) - 1 - int(np.argmin(q[::-1]))
    return best + 1, float(q[best])


def realized_error_curve(stream, target: Pmf) -> np.ndarray:
    """TV distance from target to every suffix-window estimate, r = 1..T."""
    arr = as_stream(stream)
    t = arr.size
    rev = arr[::-1]
    target_syms, target_probs = support_and_mass(target)
    stream_syms = np.unique(rev)
    # target atoms never observed contribute their mass at every window size
    observed = np.isin(target_syms, stream_syms)
    absent_mass = float(np.sum(target_probs[~observed]))
    rs = np.arange(1, t + 1, dtype=np.float64)
    errs = np.full(t, absent_mass)
    lookup = np.searchsorted(target_syms, stream_syms)
    for i, sym in enumerate(stream_syms):
        k = lookup[i]
        p = float(target_probs[k]) if k < target_syms.size and target_syms[k] == sym else 0.0
        errs += np.abs(np.cumsum(rev == sym) / rs - p)
    return 0.5 * errs


def oracle_best_window(stream, truth: Sequence[Pmf]) -> tuple[int, float]:
    """Window size minimizing the realized error against the true current pmf.

    Computable only when the truth sequence is known (simulation); ties are
    broken toward the larger window.
    """
    arr = as_stream(stream)
    if len(truth) != arr.size:
        raise ValueError("truth length must match stream length")
    errs = realized_error_curve(arr, truth[-1])
    best = errs.size - 1 - int(np.argmin(errs[::-1]))
    return best + 1, float(errs[best])

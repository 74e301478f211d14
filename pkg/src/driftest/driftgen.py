"""Drift-scenario generators: ground-truth pmf sequences plus seeded samplers.

Each scenario describes a sequence of true distributions, one per time
step, together with a sampler drawing one independent sample per step.
Sampling is inverse-CDF over sorted symbols, seeded from (scenario seed,
trial index), so identical inputs reproduce identical streams on any
platform.  Infinite-support families (geometric, zipf) are truncated to
exact finite pmfs: a tail of total mass below ``TAIL_TOL`` is dropped and
the largest atom absorbs the remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .adaptive import drift_sequence
from .dist import Pmf

TAIL_TOL = 1e-12

KINDS = ("iid", "linear_drift", "abrupt", "rotating_support",
         "geometric_drift", "zipf_drift")

# abrupt scenarios place the post-change support at this offset
ABRUPT_POST_OFFSET = 100

_MAX_TRUNCATED_SUPPORT = 20_000_000


@dataclass(frozen=True)
class DriftScenario:
    """Declarative description of a truth sequence and its sampler.

    ``t`` is the horizon (number of time steps); ``seed`` feeds the
    sampler.  Kind-specific parameters:

    - iid: ``k`` (uniform over {0..k-1}, stationary)
    - linear_drift: ``k``, ``step_delta`` -- mass moves from source symbol
      0 into the uniform block {1..k} at a fixed per-step rate, timed so
      the source empties exactly at the final step (the drift is active at
      estimation time); in the deep past the source saturates at full mass
    - abrupt: ``k``, ``change_point`` -- uniform {0..k-1}, then a
      disjoint uniform block for the last ``change_point`` steps
    - rotating_support: ``k``, ``period`` -- a uniform block of width k
      jumps to fresh symbols every ``period`` steps
    - geometric_drift: ``geo_p_start``, ``geo_p_end`` -- success
      probability interpolates linearly across the horizon
    - zipf_drift: ``zipf_s_start``, ``zipf_s_end`` -- power-law exponent
      interpolates linearly across the horizon
    """

    kind: str
    t: int
    seed: int
    k: int | None = None
    step_delta: float | None = None
    change_point: int | None = None
    period: int | None = None
    geo_p_start: float | None = None
    geo_p_end: float | None = None
    zipf_s_start: float | None = None
    zipf_s_end: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.t < 1:
            raise ValueError("t must be >= 1")
        need = {
            "iid": ("k",),
            "linear_drift": ("k", "step_delta"),
            "abrupt": ("k", "change_point"),
            "rotating_support": ("k", "period"),
            "geometric_drift": ("geo_p_start", "geo_p_end"),
            "zipf_drift": ("zipf_s_start", "zipf_s_end"),
        }[self.kind]
        for key in need:
            if getattr(self, key) is None:
                raise ValueError(f"{self.kind} requires key '{key}'")
        if self.k is not None and self.k < 1:
            raise ValueError("key 'k': support size must be >= 1")
        if self.kind == "linear_drift" and self.step_delta < 0:
            raise ValueError("key 'step_delta': must be >= 0")
        if self.kind == "abrupt":
            if not 1 <= self.change_point < self.t:
                raise ValueError("key 'change_point': must lie in [1, t-1]")
            if self.k > ABRUPT_POST_OFFSET:
                raise ValueError(f"key 'k': abrupt supports must stay below {ABRUPT_POST_OFFSET}")
        if self.kind == "rotating_support" and self.period < 1:
            raise ValueError("key 'period': must be >= 1")
        if self.kind == "geometric_drift":
            for key in ("geo_p_start", "geo_p_end"):
                p = getattr(self, key)
                if not 0.0 < p <= 1.0:
                    raise ValueError(f"key '{key}': must lie in (0, 1]")
        if self.kind == "zipf_drift":
            for key in ("zipf_s_start", "zipf_s_end"):
                s = getattr(self, key)
                if not s > 1.0:
                    raise ValueError(f"key '{key}': exponent must exceed 1")


def iid(k: int, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("iid", t, seed, k=k)


def linear_drift(k: int, step_delta: float, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("linear_drift", t, seed, k=k, step_delta=step_delta)


def abrupt(k: int, change_point: int, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("abrupt", t, seed, k=k, change_point=change_point)


def rotating_support(k: int, period: int, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("rotating_support", t, seed, k=k, period=period)


def geometric_drift(p_start: float, p_end: float, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("geometric_drift", t, seed,
                         geo_p_start=p_start, geo_p_end=p_end)


def zipf_drift(s_start: float, s_end: float, t: int, seed: int = 0) -> DriftScenario:
    return DriftScenario("zipf_drift", t, seed,
                         zipf_s_start=s_start, zipf_s_end=s_end)


# --- truncated infinite-support families ----------------------------------


def _absorb_remainder(symbols: np.ndarray, probs: np.ndarray) -> Pmf:
    """Give any missing mass (dropped tail plus rounding) to the largest atom."""
    probs = probs.copy()
    probs[int(np.argmax(probs))] += 1.0 - float(np.sum(probs))
    return Pmf(symbols, probs)


@lru_cache(maxsize=4096)
def _geometric_pmf(p: float) -> Pmf:
    if p >= 1.0:
        return Pmf.point_mass(0)
    n = max(1, math.ceil(math.log(TAIL_TOL) / math.log1p(-p)))
    i = np.arange(n, dtype=np.int64)
    probs = p * np.power(1.0 - p, i, dtype=np.float64)
    return _absorb_remainder(i, probs)


@lru_cache(maxsize=4096)
def _zipf_pmf(s: float) -> Pmf:
    total = float(_hurwitz_zeta(s, 1))
    # smallest n with relative tail mass below TAIL_TOL, by doubling + bisect
    lo, hi = 1, 2
    while float(_hurwitz_zeta(s, hi + 1)) / total >= TAIL_TOL:
        lo, hi = hi, hi * 2
        if hi > _MAX_TRUNCATED_SUPPORT:
            raise ValueError(
                f"zipf exponent {s} needs more than {_MAX_TRUNCATED_SUPPORT} atoms "
                f"to reach tail mass {TAIL_TOL}; use a larger exponent")
    while lo < hi:
        mid = (lo + hi) // 2
        if float(_hurwitz_zeta(s, mid + 1)) / total < TAIL_TOL:
            hi = mid
        else:
            lo = mid + 1
    n = hi
    i = np.arange(1, n + 1, dtype=np.int64)
    probs = np.power(i, -s, dtype=np.float64) / total
    return _absorb_remainder(i, probs)


# --- truth sequences -------------------------------------------------------


def _linear_alpha(scenario: DriftScenario, t: int) -> float:
    """Source-symbol mass at step t: drains to zero exactly at the horizon."""
    return min((scenario.t - t) * scenario.step_delta, 1.0)


def _linear_pmf(scenario: DriftScenario, t: int) -> Pmf:
    k = scenario.k
    alpha = _linear_alpha(scenario, t)
    if alpha >= 1.0:
        return Pmf.point_mass(0)
    block = np.arange(1, k + 1, dtype=np.int64)
    if alpha <= 0.0:
        return Pmf(block, np.full(k, 1.0 / k))
    symbols = np.concatenate([[0], block])
    probs = np.concatenate([[alpha], np.full(k, (1.0 - alpha) / k)])
    return Pmf(symbols, probs)


@lru_cache(maxsize=64)
def segments(scenario: DriftScenario) -> tuple[tuple[int, Pmf], ...]:
    """Run-length encoding of the truth sequence, oldest first."""
    t_max = scenario.t
    if scenario.kind == "iid":
        return ((t_max, Pmf.uniform(range(scenario.k))),)
    if scenario.kind == "abrupt":
        pre = Pmf.uniform(range(scenario.k))
        post = Pmf.uniform(range(ABRUPT_POST_OFFSET, ABRUPT_POST_OFFSET + scenario.k))
        m = scenario.change_point
        return ((t_max - m, pre), (m, post))
    if scenario.kind == "rotating_support":
        out = []
        t = 1
        while t <= t_max:
            block = (t - 1) // scenario.period
            span = min(scenario.period * (block + 1), t_max) - t + 1
            lo = block * scenario.k
            out.append((span, Pmf.uniform(range(lo, lo + scenario.k))))
            t += span
        return tuple(out)
    if scenario.kind == "linear_drift":
        out = []
        frozen = 0
        for t in range(1, t_max + 1):
            if _linear_alpha(scenario, t) >= 1.0:
                frozen += 1
            else:
                break
        if frozen:
            out.append((frozen, Pmf.point_mass(0)))
        for t in range(frozen + 1, t_max + 1):
            out.append((1, _linear_pmf(scenario, t)))
        return tuple(out)
    # schedule-driven families; a flat schedule collapses to one segment
    if scenario.kind == "geometric_drift":
        start, end, family = scenario.geo_p_start, scenario.geo_p_end, _geometric_pmf
    else:
        start, end, family = scenario.zipf_s_start, scenario.zipf_s_end, _zipf_pmf
    if start == end or t_max == 1:
        return ((t_max, family(start)),)
    ramp = (end - start) / (t_max - 1)
    return tuple((1, family(start + ramp * (t - 1))) for t in range(1, t_max + 1))


@lru_cache(maxsize=32)
def truth_pmfs(scenario: DriftScenario) -> tuple[Pmf, ...]:
    """The full truth sequence, index t-1 holding the distribution of step t."""
    out: list[Pmf] = []
    for count, pmf in segments(scenario):
        out.extend([pmf] * count)
    return tuple(out)


def true_pmf(scenario: DriftScenario, t: int) -> Pmf:
    """True distribution at step t (1-based)."""
    if not 1 <= t <= scenario.t:
        raise ValueError(f"time step {t} outside [1, {scenario.t}]")
    return truth_pmfs(scenario)[t - 1]


@lru_cache(maxsize=32)
def _delta_curve(scenario: DriftScenario) -> np.ndarray:
    curve = drift_sequence(truth_pmfs(scenario))
    curve.setflags(write=False)
    return curve


def scenario_delta(scenario: DriftScenario, r: int) -> float:
    """Exact drift error of the most recent r steps, from the true pmfs."""
    if not 1 <= r <= scenario.t:
        raise ValueError(f"window size {r} outside [1, {scenario.t}]")
    return float(_delta_curve(scenario)[r - 1])


def scenario_delta_curve(scenario: DriftScenario) -> np.ndarray:
    """Drift errors for every window size 1..t (read-only array)."""
    return _delta_curve(scenario)


# --- sampling --------------------------------------------------------------


def _trial_rng(scenario: DriftScenario, trial: int) -> np.random.Generator:
    if trial < 0:
        raise ValueError("trial index must be >= 0")
    seed = scenario.seed & 0xFFFFFFFFFFFFFFFF
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _inverse_cdf(pmf: Pmf, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(pmf.probs)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, u, side="right")
    return pmf.symbols[np.minimum(idx, pmf.symbols.size - 1)]


def sample_stream(scenario: DriftScenario, trial: int) -> np.ndarray:
    """Draw one sample per step, oldest first; reproducible from (seed, trial)."""
    rng = _trial_rng(scenario, trial)
    u = rng.random(scenario.t)
    if scenario.kind == "linear_drift":
        # inverse CDF over sorted symbols [0, 1..k], vectorized across steps;
        # steps with a saturated source always emit symbol 0
        ts = np.arange(1, scenario.t + 1)
        alpha = np.minimum((scenario.t - ts) * scenario.step_delta, 1.0)
        k = scenario.k
        block_mass = np.where(alpha < 1.0, 1.0 - alpha, 1.0)
        offset = np.floor((u - alpha) / block_mass * k)
        block = 1 + np.minimum(offset, k - 1).astype(np.int64)
        return np.where(u < alpha, 0, block).astype(np.int64)
    out = np.empty(scenario.t, dtype=np.int64)
    pos = 0
    for count, pmf in segments(scenario):
        out[pos:pos + count] = _inverse_cdf(pmf, u[pos:pos + count])
        pos += count
    return out


# --- scenario config text format ------------------------------------------
#
# key = value lines; blank lines and '#' comments ignored.  Keys: kind, t,
# seed, and the kind-specific parameters.  Unknown keys are an error.

_INT_KEYS = ("t", "seed", "k", "change_point", "period")
_FLOAT_KEYS = ("step_delta", "geo_p_start", "geo_p_end", "zipf_s_start", "zipf_s_end")


def parse_scenario_config(text: str) -> DriftScenario:
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "kind":
            fields["kind"] = value
        elif key in _INT_KEYS:
            try:
                fields[key] = int(value)
            except ValueError:
                raise ValueError(f"key '{key}': invalid integer {value!r}") from None
        elif key in _FLOAT_KEYS:
            try:
                fields[key] = float(value)
            except ValueError:
                raise ValueError(f"key '{key}': invalid number {value!r}") from None
        else:
            raise ValueError(f"unknown key '{key}'")
    for key in ("kind", "t", "seed"):
        if key not in fields:
            raise ValueError(f"missing key '{key}'")
    return DriftScenario(**fields)


def load_scenario(path) -> DriftScenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario_config(fh.read())

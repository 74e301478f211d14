"""Dyadic suffix windows of a sample stream and their statistical-error bounds.

A stream of ``T`` samples (oldest first) induces one empirical window per
dyadic size 2^j, j = 0 .. floor(log2 T), each over the most recent 2^j
samples.  For every window we can compute a data-dependent high-probability
upper bound on its statistical error; the bound carries a union-bound
weight over all dyadic sizes so that it holds for all of them at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dist import EmpiricalWindow, phi_empirical

# Union-bound weight constant: 4 * pi^2 / 3.  With per-size failure shares
# delta * (6/pi^2) / (j+1)^2 this makes the simultaneous bound hold with
# total failure probability delta, since (j+1)^2 <= 2 (j^2 + 1).
UNION_BOUND_CONSTANT = 4.0 * math.pi**2 / 3.0


def dyadic_depth(t: int) -> int:
    """Largest j with 2^j <= t."""
    if t < 1:
        raise ValueError("stream length must be >= 1")
    return int(t).bit_length() - 1


def as_stream(samples) -> np.ndarray:
    """Validate a sample stream (oldest first) into an int64 array."""
    arr = np.asarray(samples, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("a sample stream must be one-dimensional")
    if arr.size == 0:
        raise ValueError("empty sample stream")
    if np.any(arr < 0):
        raise ValueError("samples must be nonnegative integers")
    return arr


@dataclass(frozen=True, eq=False)
class DyadicLadder:
    """Empirical windows of sizes 1, 2, 4, ... over a stream's suffixes."""

    windows: tuple[EmpiricalWindow, ...]

    def __post_init__(self):
        for j, w in enumerate(self.windows):
            if w.size != 2**j:
                raise ValueError(f"window {j} has size {w.size}, expected {2**j}")

    @property
    def depth(self) -> int:
        """Largest window index."""
        return len(self.windows) - 1

    def __len__(self) -> int:
        return len(self.windows)

    def __getitem__(self, j: int) -> EmpiricalWindow:
        return self.windows[j]


def build_ladder(stream) -> DyadicLadder:
    """Count the dyadic suffix windows of a stream in one backward pass.

    Scans the most recent 2^floor(log2 T) samples from newest to oldest in
    doubling blocks, merging sorted (symbol, count) runs and snapshotting
    each time the scanned length reaches a power of two.  Samples older
    than the largest dyadic window are never touched.
    """
    arr = as_stream(stream)
    t = arr.size
    depth = dyadic_depth(t)

    syms, counts = np.unique(arr[t - 1:], return_counts=True)
    windows = [EmpiricalWindow(syms, counts, 1)]
    for j in range(1, depth + 1):
        lo, hi = t - 2**j, t - 2 ** (j - 1)
        block_syms, block_counts = np.unique(arr[lo:hi], return_counts=True)
        union = np.union1d(syms, block_syms)
        merged = np.zeros(union.size, dtype=np.int64)
        merged[np.searchsorted(union, syms)] += counts
        merged[np.searchsorted(union, block_syms)] += block_counts
        syms, counts = union, merged
        windows.append(EmpiricalWindow(syms, counts, 2**j))
    return DyadicLadder(tuple(windows))


def union_log_weight(r: float, delta: float) -> float:
    """log(C * (log2(r)^2 + 1) / delta), the union-bound log factor at size r."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    if r < 1:
        raise ValueError("window size must be >= 1")
    lg = math.log2(r)
    return math.log(UNION_BOUND_CONSTANT * (lg * lg + 1.0) / delta)


def concentration_radius(j: int, delta: float) -> float:
    """Deviation term of the dyadic window bound: 3 sqrt(log-weight / 2^j)."""
    if j < 0:
        raise ValueError("window index must be >= 0")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    log_weight = math.log(UNION_BOUND_CONSTANT * (j * j + 1.0) / delta)
    return 3.0 * math.sqrt(log_weight / 2**j)


def xi_bound(w: EmpiricalWindow, j: int, delta: float) -> float:
    """Data-dependent statistical-error bound for dyadic window j.

    Sum of the window's empirical complexity and the union-weighted
    concentration radius.  Not clamped to 1: small windows legitimately
    yield vacuous values, and downstream comparisons rely on the exact
    arithmetic.
    """
    if w.size != 2**j:
        raise ValueError(f"window size {w.size} does not match index {j}")
    return phi_empirical(w) + concentration_radius(j, delta)


def ladder_xis(ladder: DyadicLadder, delta: float) -> list[float]:
    """The statistical-error bound of every window in the ladder."""
    return [xi_bound(w, j, delta) for j, w in enumerate(ladder.windows)]


# --- sample stream text format -------------------------------------------
#
# One nonnegative decimal integer per line, oldest first; blank lines and
# lines starting with '#' are ignored.


def parse_stream_text(text: str) -> np.ndarray:
    samples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = int(line)
        except ValueError:
            raise ValueError(f"line {lineno}: {line!r} is not an integer") from None
        if value < 0:
            raise ValueError(f"line {lineno}: negative sample {value}")
        samples.append(value)
    if not samples:
        raise ValueError("empty sample stream")
    return np.asarray(samples, dtype=np.int64)


def load_stream(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_stream_text(fh.read())


def dump_stream(samples: Iterable[int], path) -> None:
    arr = as_stream(samples)
    with open(path, "w", encoding="utf-8") as fh:
        for value in arr:
            fh.write(f"{int(value)}\n")

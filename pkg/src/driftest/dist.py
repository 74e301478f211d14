"""Sparse discrete distributions and the complexity functionals built on them.

Symbols are nonnegative integers.  Supports are finite and stored as sorted
arrays so every sum over a support runs in a fixed (sorted-symbol) order,
which keeps all derived quantities bit-reproducible from run to run.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

# |sum of probabilities - 1| allowed for a valid pmf
MASS_TOL = 1e-9


def _sorted_atoms(symbols, weights, weight_kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Normalize (symbols, weights) into sorted, validated atom arrays."""
    syms = np.asarray(symbols, dtype=np.int64)
    w = np.asarray(weights, dtype=np.float64 if weight_kind == "prob" else np.int64)
    if syms.ndim != 1 or w.ndim != 1 or syms.shape != w.shape:
        raise ValueError("symbols and weights must be 1-D arrays of equal length")
    if syms.size == 0:
        raise ValueError("support must be non-empty")
    if np.any(syms < 0):
        raise ValueError("symbols must be nonnegative integers")
    order = np.argsort(syms, kind="stable")
    syms = syms[order]
    w = w[order]
    if np.any(syms[1:] == syms[:-1]):
        raise ValueError("duplicate symbols in support")
    if weight_kind == "prob":
        if not np.all(np.isfinite(w)):
            raise ValueError("probabilities must be finite")
        if np.any(w < 0.0):
            raise ValueError("probabilities must be nonnegative")
        keep = w > 0.0
        syms, w = syms[keep], w[keep]
        if syms.size == 0:
            raise ValueError("pmf has no positive-mass atoms")
    else:
        if np.any(w <= 0):
            raise ValueError("counts must be positive integers")
    syms.setflags(write=False)
    w.setflags(write=False)
    return syms, w


@dataclass(frozen=True, eq=False)
class Pmf:
    """Exact probability mass function over nonnegative integer symbols.

    Only strictly positive atoms are stored; probabilities must sum to 1
    within ``MASS_TOL``.  Instances are immutable and safe to share.
    """

    symbols: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        syms, probs = _sorted_atoms(self.symbols, self.probs, "prob")
        total = float(np.sum(probs))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"pmf mass is {total!r}, not 1 within {MASS_TOL}")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_dict(cls, atoms: Mapping[int, float]) -> "Pmf":
        items = sorted(atoms.items())
        return cls(np.array([s for s, _ in items], dtype=np.int64),
                   np.array([p for _, p in items], dtype=np.float64))

    @classmethod
    def point_mass(cls, symbol: int) -> "Pmf":
        return cls(np.array([symbol], dtype=np.int64), np.array([1.0]))

    @classmethod
    def uniform(cls, symbols: Iterable[int]) -> "Pmf":
        syms = np.asarray(sorted(set(int(s) for s in symbols)), dtype=np.int64)
        return cls(syms, np.full(syms.size, 1.0 / syms.size))

    @property
    def support_size(self) -> int:
        return int(self.symbols.size)

    def prob(self, symbol: int) -> float:
        """Probability of one symbol (0 when outside the support)."""
        i = np.searchsorted(self.symbols, symbol)
        if i < self.symbols.size and self.symbols[i] == symbol:
            return float(self.probs[i])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(s): float(p) for s, p in zip(self.symbols, self.probs)}

    def to_json_obj(self) -> dict:
        return {"atoms": [{"symbol": int(s), "prob": float(p)}
                          for s, p in zip(self.symbols, self.probs)]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Pmf":
        atoms = obj["atoms"]
        return cls(np.array([a["symbol"] for a in atoms], dtype=np.int64),
                   np.array([a["prob"] for a in atoms], dtype=np.float64))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "Pmf":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True, eq=False)
class EmpiricalWindow:
    """Symbol counts over the most recent ``size`` samples of a stream."""

    symbols: np.ndarray
    counts: np.ndarray
    size: int

    def __post_init__(self):
        syms, counts = _sorted_atoms(self.symbols, self.counts, "count")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "size", int(self.size))
        if int(np.sum(counts)) != self.size:
            raise ValueError("window counts must sum to the window size")

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalWindow":
        arr = np.asarray(samples, dtype=np.int64)
        if arr.size == 0:
            raise ValueError("empty sample window")
        syms, counts = np.unique(arr, return_counts=True)
        return cls(syms, counts, int(arr.size))

    @property
    def freqs(self) -> np.ndarray:
        """Induced probabilities counts / size."""
        return self.counts / float(self.size)

    def to_pmf(self) -> Pmf:
        return Pmf(self.symbols.copy(), self.freqs)


Distribution = Union[Pmf, EmpiricalWindow]


def support_and_mass(d: Distribution) -> tuple[np.ndarray, np.ndarray]:
    """Sorted symbols and their probabilities, for a pmf or a window."""
    if isinstance(d, EmpiricalWindow):
        return d.symbols, d.freqs
    return d.symbols, d.probs


def tv_distance(p: Distribution, q: Distribution) -> float:
    """Total variation distance: half the L1 distance over the union support."""
    ps, pw = support_and_mass(p)
    qs, qw = support_and_mass(q)
    union = np.union1d(ps, qs)
    a = np.zeros(union.size)
    b = np.zeros(union.size)
    a[np.searchsorted(union, ps)] = pw
    b[np.searchsorted(union, qs)] = qw
    return 0.5 * float(np.sum(np.abs(a - b)))


def lambda_complexity(p: Distribution, r: int) -> float:
    """Learning-complexity functional at sample budget r.

    Atoms below mass 1/r contribute linearly; atoms at or above the
    threshold contribute sqrt(mass)/sqrt(r).  The tight rate for
    estimating the distribution from r samples.
    """
    if r < 1:
        raise ValueError("sample budget r must be >= 1")
    _, w = support_and_mass(p)
    heavy = w >= 1.0 / r
    return float(np.sum(w[~heavy]) + np.sum(np.sqrt(w[heavy])) / math.sqrt(r))


def half_norm(p: Distribution) -> float:
    """Squared sum of root masses; lies in [1, support size]."""
    _, w = support_and_mass(p)
    s = float(np.sum(np.sqrt(w)))
    return s * s


def phi_empirical(w: EmpiricalWindow) -> float:
    """Empirical complexity of a window: sum of sqrt(counts/r) over sqrt(r).

    Equals sqrt(half_norm(w) / r); computable from the samples alone and
    upper-bounds the statistical error of the window's estimate.
    """
    r = w.size
    return float(np.sum(np.sqrt(w.counts / float(r))) / math.sqrt(r))


def mean_pmf(seq: Sequence[Pmf]) -> Pmf:
    """Entrywise arithmetic mean of pmfs; support is the union of supports."""
    if len(seq) == 0:
        raise ValueError("cannot average an empty sequence of pmfs")
    # Repeated objects are common (piecewise-constant truth sequences), so
    # collapse them to weighted atoms first.
    groups = Counter(seq)
    n = len(seq)
    union = np.unique(np.concatenate([p.symbols for p in groups]))
    acc = np.zeros(union.size)
    for p, count in groups.items():
        acc[np.searchsorted(union, p.symbols)] += (count / n) * p.probs
    return Pmf(union, acc)

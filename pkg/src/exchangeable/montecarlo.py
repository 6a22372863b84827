"""Seeded samplers and estimators for sizes beyond exact enumeration.

Floats live only here.  Sources produce integer arrays of shape
``(count, n)`` holding alphabet positions; :func:`sample_path` maps them
back to symbols.  Confidence radii are 3 sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import DomainError, JointLaw
from .empirical import Measure, TestFunction
from .families import COUNTEREXAMPLE_ALPHABET, MarkovSpec

Z = 3.0


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 stream determined by ``(seed, stream)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class Estimate:
    point: float
    half_width: float
    n_samples: int
    seed: int | None = None
    hits: int | None = None
    note: str | None = None

    @property
    def low(self) -> float:
        return self.point - self.half_width

    @property
    def high(self) -> float:
        return self.point + self.half_width

    def covers(self, value) -> bool:
        return bool(self.low <= float(value) <= self.high)

    def to_doc(self) -> dict:
        doc = {"point": self.point, "half_width": self.half_width, "n_samples": self.n_samples,
               "seed": self.seed, "level": "3sigma"}
        if self.hits is not None:
            doc["hits"] = self.hits
        if self.note:
            doc["note"] = self.note
        return doc


# ---------------------------------------------------------------------------
# Sources


class LawSource:
    """Inverse-CDF sampling of an exact law in lexicographic alphabet order."""

    def __init__(self, law: JointLaw):
        self.alphabet = law.alphabet
        self.length = law.length
        outcomes = law.support()
        cum = []
        acc = Fraction(0)
        for x in outcomes:
            acc += law.prob(x)
            cum.append(float(acc))
        cum[-1] = 1.0
        self._cum = np.array(cum)
        self._table = np.array([law.sort_key(x) for x in outcomes], dtype=np.int64)

    def sample_indices(self, rng: np.random.Generator, count: int) -> np.ndarray:
        u = rng.random(count)
        return self._table[np.searchsorted(self._cum, u, side="right")]


def _probs(m: Measure) -> np.ndarray:
    return np.array([float(m[a]) for a in m.alphabet])


class IidSource:
    def __init__(self, base: Measure, n: int):
        self.alphabet, self.length = base.alphabet, n
        self._p = _probs(base)

    def sample_indices(self, rng, count):
        return rng.choice(len(self.alphabet), size=(count, self.length), p=self._p)


def _draw_rows(rng, weights: np.ndarray) -> np.ndarray:
    """One categorical draw per row of a nonnegative weight matrix."""
    cum = np.cumsum(weights, axis=1)
    u = rng.random(len(weights)) * cum[:, -1]
    return (u[:, None] >= cum).sum(axis=1)


class PolyaSource:
    def __init__(self, counts: Measure, reinforcement: int, n: int, replace: bool = True):
        self.alphabet, self.length = counts.alphabet, n
        self._counts = np.array([int(counts[a]) for a in counts.alphabet], dtype=np.int64)
        self._step = reinforcement
        self._replace = replace

    def sample_indices(self, rng, count):
        urn = np.tile(self._counts, (count, 1))
        out = np.empty((count, self.length), dtype=np.int64)
        rows = np.arange(count)
        for i in range(self.length):
            draw = _draw_rows(rng, urn.astype(float))
            out[:, i] = draw
            urn[rows, draw] += self._step if self._replace else -1
        return out


class UrnSource(PolyaSource):
    """Draws without replacement."""

    def __init__(self, counts: Measure, n: int):
        if n > counts.total:
            raise DomainError("cannot draw %d items from an urn of %s" % (n, counts.total))
        super().__init__(counts, 0, n, replace=False)


class MarkovSource:
    def __init__(self, spec: MarkovSpec, n: int):
        self.alphabet, self.length = spec.alphabet, n
        self._init = _probs(spec.init)
        self._kernel = np.array([_probs(spec.kernel[a]) for a in spec.alphabet])

    def sample_indices(self, rng, count):
        out = np.empty((count, self.length), dtype=np.int64)
        out[:, 0] = rng.choice(len(self.alphabet), size=count, p=self._init)
        for i in range(1, self.length):
            out[:, i] = _draw_rows(rng, self._kernel[out[:, i - 1]])
        return out


class CounterexampleSource:
    """Generative form: alpha uniform on {-1, 0, 1}, then f(alpha, U_i)."""

    def __init__(self, n: int):
        self.alphabet, self.length = COUNTEREXAMPLE_ALPHABET, n

    def sample_indices(self, rng, count):
        alpha = rng.integers(-1, 2, size=count)
        u = rng.random((count, self.length))
        out = np.where(u < 0.5, 1, 2)
        out[alpha == -1] = 1
        out[alpha == 0] = 0
        return out  # symbol values 0, 1, 2 coincide with alphabet positions


def as_source(obj):
    return LawSource(obj) if isinstance(obj, JointLaw) else obj


def sample_indices(source, rng: np.random.Generator, count: int) -> np.ndarray:
    return as_source(source).sample_indices(rng, count)


def sample_path(source, rng: np.random.Generator, count: int) -> list[tuple]:
    src = as_source(source)
    alphabet = src.alphabet
    return [tuple(alphabet[i] for i in row) for row in src.sample_indices(rng, count)]


def sample_sharded(source, seed: int, count: int, shards: int = 1) -> np.ndarray:
    """Samples from ``shards`` independent streams ``(seed, shard)``, concatenated in shard order."""
    src = as_source(source)
    sizes = [count // shards + (i < count % shards) for i in range(shards)]
    parts = [src.sample_indices(make_rng(seed, i), s) for i, s in enumerate(sizes)]
    return np.concatenate(parts) if parts else np.empty((0, src.length), dtype=np.int64)


# ---------------------------------------------------------------------------
# Estimators


def estimate_probability(source, event: Callable[[np.ndarray], np.ndarray], rng, count: int,
                         seed: int | None = None) -> Estimate:
    hits = event(sample_indices(source, rng, count))
    p = float(hits.mean())
    return Estimate(p, Z * np.sqrt(p * (1 - p) / count), count, seed, int(hits.sum()))


def estimate_conditional(source, event: Callable, given: Callable, rng, count: int,
                         seed: int | None = None) -> Estimate:
    """Ratio estimator of P(event | given) with a delta-method radius."""
    x = sample_indices(source, rng, count)
    g = given(x)
    hits = int(g.sum())
    if hits == 0:
        return Estimate(float("nan"), float("inf"), count, seed, 0, "insufficient conditioning mass")
    p = float((event(x) & g).sum() / hits)
    # Var of the ratio: p(1 - p) / (count * P(given)) = p(1 - p) / hits.
    return Estimate(p, Z * np.sqrt(p * (1 - p) / hits), count, seed, hits)


def all_equal(symbol_index: int, coords: Sequence[int] | slice | None = None) -> Callable:
    """Event: every selected coordinate (0-based) equals ``symbol_index``."""
    def event(x):
        sel = x if coords is None else x[:, coords]
        return (sel == symbol_index).all(axis=1)
    return event


def _f_values(f, alphabet) -> np.ndarray:
    if isinstance(f, TestFunction):
        return np.array([float(f(a)) for a in alphabet])
    if isinstance(f, Mapping):
        return np.array([float(f[a]) for a in alphabet])
    return np.asarray(f, dtype=float)


def mc_reverse_martingale_diagnostic(source, k: int, f, rng, count: int,
                                     min_hits: int = 50) -> dict:
    """Per-bin estimates of E(eta_{k-1} f - eta_k f | eta_k, tail after k).

    Bins are exact values of (symbol counts of the first ``k`` coordinates,
    coordinates ``k+1..n``); bins with fewer than ``min_hits`` samples are
    dropped.  Keys are ``(counts, tail)`` tuples of alphabet positions.
    """
    src = as_source(source)
    if not 2 <= k <= src.length:
        raise DomainError("k=%d out of range" % k)
    x = src.sample_indices(rng, count)
    fv = _f_values(f, src.alphabet)
    vals = fv[x[:, :k]]
    diff = vals[:, :k - 1].sum(axis=1) / (k - 1) - vals.sum(axis=1) / k
    s = len(src.alphabet)
    counts = np.stack([(x[:, :k] == a).sum(axis=1) for a in range(s)], axis=1)
    keys = np.concatenate([counts, x[:, k:]], axis=1)
    uniq, inverse, sizes = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    sums = np.bincount(inverse, weights=diff, minlength=len(uniq))
    sq = np.bincount(inverse, weights=diff * diff, minlength=len(uniq))
    out = {}
    for b, key in enumerate(uniq):
        h = int(sizes[b])
        if h < min_hits:
            continue
        mean = sums[b] / h
        var = max(sq[b] / h - mean * mean, 0.0) * h / (h - 1)
        key = (tuple(int(v) for v in key[:s]), tuple(int(v) for v in key[s:]))
        out[key] = Estimate(float(mean), float(Z * np.sqrt(var / h)), h)
    return out

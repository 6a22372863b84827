"""Empirical measures along a path, factorial measures, and test functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import DomainError, Symbol, as_fraction
from .report import rational_str


class Measure:
    """Rational masses on a finite alphabet (zero masses are kept explicit)."""

    __slots__ = ("alphabet", "masses")

    def __init__(self, alphabet: Sequence[Symbol], masses: Mapping[Symbol, object] | None = None):
        self.alphabet = tuple(alphabet)
        masses = masses or {}
        unknown = set(masses) - set(self.alphabet)
        if unknown:
            raise DomainError("symbols %r not in alphabet" % sorted(map(str, unknown)))
        self.masses = {a: as_fraction(masses.get(a, 0)) for a in self.alphabet}
        if any(v < 0 for v in self.masses.values()):
            raise DomainError("measure masses must be nonnegative")

    @classmethod
    def zero(cls, alphabet: Sequence[Symbol]) -> "Measure":
        return cls(alphabet)

    @classmethod
    def delta(cls, alphabet: Sequence[Symbol], a: Symbol) -> "Measure":
        return cls(alphabet, {a: 1})

    @classmethod
    def counts_of(cls, alphabet: Sequence[Symbol], symbols: Iterable[Symbol]) -> "Measure":
        m = dict.fromkeys(alphabet, 0)
        for a in symbols:
            if a not in m:
                raise DomainError("symbol %r not in alphabet" % (a,))
            m[a] += 1
        return cls(alphabet, m)

    @classmethod
    def uniform(cls, alphabet: Sequence[Symbol]) -> "Measure":
        return cls(alphabet, {a: Fraction(1, len(alphabet)) for a in alphabet})

    @property
    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def __getitem__(self, a: Symbol) -> Fraction:
        return self.masses[a]

    def _check(self, other: "Measure") -> None:
        if other.alphabet != self.alphabet:
            raise DomainError("measures live on different alphabets")

    def __add__(self, other: "Measure") -> "Measure":
        self._check(other)
        return Measure(self.alphabet, {a: self[a] + other[a] for a in self.alphabet})

    def __sub__(self, other: "Measure") -> "Measure":
        # Differences like beta_n - beta_k stay nonnegative for genuine counts.
        self._check(other)
        return Measure(self.alphabet, {a: self[a] - other[a] for a in self.alphabet})

    def scale(self, c) -> "Measure":
        c = as_fraction(c)
        return Measure(self.alphabet, {a: c * v for a, v in self.masses.items()})

    def normalized(self) -> "Measure":
        t = self.total
        if t == 0:
            raise DomainError("cannot normalize the zero measure")
        return self.scale(1 / t)

    def is_integer(self) -> bool:
        return all(v.denominator == 1 for v in self.masses.values())

    def is_probability(self) -> bool:
        return self.total == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        return self.alphabet == other.alphabet and self.masses == other.masses

    def __hash__(self) -> int:
        return hash((self.alphabet, tuple(self.masses.values())))

    def __repr__(self) -> str:
        inner = ", ".join("%s: %s" % (a, v) for a, v in self.masses.items() if v)
        return "Measure({%s})" % inner

    def to_doc(self) -> dict:
        return {str(a): rational_str(v) for a, v in self.masses.items()}


@dataclass(frozen=True)
class TestFunction:
    """A function on the alphabet; ``name`` identifies it in witnesses."""

    __test__ = False  # not a pytest class

    name: str
    values: tuple  # (symbol, value) pairs in alphabet order

    def __call__(self, a: Symbol) -> Fraction:
        return dict(self.values)[a]

    def as_dict(self) -> dict:
        return dict(self.values)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        g = other.as_dict()
        return TestFunction("(%s+%s)" % (self.name, other.name),
                            tuple((a, v + g[a]) for a, v in self.values))


def test_function(alphabet: Sequence[Symbol], values: Mapping[Symbol, object], name: str = "f") -> TestFunction:
    if set(values) != set(alphabet):
        raise DomainError("test function must be defined on the whole alphabet")
    return TestFunction(name, tuple((a, as_fraction(values[a])) for a in alphabet))


test_function.__test__ = False  # type: ignore[attr-defined]


def indicator(alphabet: Sequence[Symbol], a: Symbol) -> TestFunction:
    return TestFunction("1{%s}" % (a,), tuple((b, Fraction(int(b == a))) for b in alphabet))


def indicators(alphabet: Sequence[Symbol]) -> list[TestFunction]:
    return [indicator(alphabet, a) for a in alphabet]


def integrate(m: Measure, f: TestFunction) -> Fraction:
    """The integral of ``f`` against ``m``."""
    if tuple(a for a, _ in f.values) != m.alphabet:
        raise DomainError("measure and test function alphabets differ")
    return sum((v * m[a] for a, v in f.values), Fraction(0))


@dataclass(frozen=True)
class EmpiricalPath:
    path: tuple
    measures: tuple  # eta_1, ..., eta_n

    def __getitem__(self, k: int) -> Measure:
        """eta_k for 1 <= k <= n; eta_0 is the zero measure by convention."""
        if k == 0:
            return Measure.zero(self.measures[0].alphabet)
        return self.measures[k - 1]


def empirical_path(x: Sequence[Symbol], alphabet: Sequence[Symbol]) -> EmpiricalPath:
    x = tuple(x)
    if not x:
        raise DomainError("path must have length >= 1")
    measures = []
    counts = dict.fromkeys(alphabet, 0)
    for k, a in enumerate(x, start=1):
        if a not in counts:
            raise DomainError("symbol %r not in alphabet" % (a,))
        counts[a] += 1
        measures.append(Measure(alphabet, {b: Fraction(c, k) for b, c in counts.items()}))
    return EmpiricalPath(x, tuple(measures))


def empirical_measure(x: Sequence[Symbol], alphabet: Sequence[Symbol], k: int | None = None) -> Measure:
    x = tuple(x)
    k = len(x) if k is None else k
    if not 1 <= k <= len(x):
        raise DomainError("k=%d out of range" % k)
    return Measure.counts_of(alphabet, x[:k]).scale(Fraction(1, k))


def empirical_2d(X: Sequence[Sequence[Symbol]], n: int, m: int, alphabet: Sequence[Symbol]) -> Measure:
    """Uniform average of point masses over the top-left ``n x m`` block."""
    rows = len(X)
    cols = len(X[0]) if rows else 0
    if not (1 <= n <= rows and 1 <= m <= cols):
        raise DomainError("block (%d, %d) outside a %dx%d matrix" % (n, m, rows, cols))
    entries = (X[i][j] for i in range(n) for j in range(m))
    return Measure.counts_of(alphabet, entries).scale(Fraction(1, n * m))


# ---------------------------------------------------------------------------
# Factorial measures


@dataclass(frozen=True)
class FactorialMeasure:
    order: int
    masses: tuple  # sorted ((tuple, int), ...) with positive integer masses

    def mass(self, t: tuple) -> int:
        return dict(self.masses).get(tuple(t), 0)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.masses)

    def support(self) -> list:
        return [t for t, _ in self.masses]

    def normalized(self) -> dict:
        """Masses divided by ``order!`` as exact rationals."""
        fact = math.factorial(self.order)
        return {t: Fraction(v, fact) for t, v in self.masses}

    def draw_law(self) -> dict:
        """Masses divided by their total; for a count measure this is the law
        of ``order`` ordered draws without replacement at any order."""
        total = self.total
        if total == 0:
            raise DomainError("empty factorial measure")
        return {t: Fraction(v, total) for t, v in self.masses}

    def integrate(self, fs: Sequence[TestFunction]) -> Fraction:
        """Integral against the tensor product ``f_1 x ... x f_order``."""
        if len(fs) != self.order:
            raise DomainError("need %d test functions" % self.order)
        total = Fraction(0)
        for t, v in self.masses:
            term = Fraction(v)
            for f, a in zip(fs, t):
                term *= f(a)
            total += term
        return total


def _distinct_arrangements(multiset: list) -> list[tuple]:
    """Distinct rearrangements of ``multiset`` in lexicographic order of positions."""
    out = []
    symbols = sorted(set(multiset), key=multiset.index)
    remaining = {a: multiset.count(a) for a in symbols}
    n = len(multiset)

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for a in symbols:
            if remaining[a]:
                remaining[a] -= 1
                prefix.append(a)
                rec(prefix)
                prefix.pop()
                remaining[a] += 1

    rec([])
    return out


def factorial_measure(s: Sequence[Symbol]) -> FactorialMeasure:
    """Unit mass on every distinct rearrangement of ``s``."""
    s = list(s)
    return FactorialMeasure(len(s), tuple((t, 1) for t in _distinct_arrangements(s)))


def count_measure_factorial(beta: Measure, k: int) -> FactorialMeasure:
    """Number of ordered ways to draw each length-``k`` tuple from the urn ``beta``.

    Draws are sequential without replacement; at full order every distinct
    arrangement gets mass ``prod_a beta(a)!``, so dividing by ``k!`` yields
    the uniform law on arrangements.
    """
    if not beta.is_integer():
        raise DomainError("urn counts must be integers")
    total = int(beta.total)
    if k < 0 or k > total:
        raise DomainError("cannot draw %d items from an urn of %d" % (k, total))
    counts = {a: int(v) for a, v in beta.masses.items()}
    out = []

    def rec(prefix, weight):
        if len(prefix) == k:
            out.append((tuple(prefix), weight))
            return
        for a in beta.alphabet:
            c = counts[a]
            if c:
                counts[a] = c - 1
                prefix.append(a)
                rec(prefix, weight * c)
                prefix.pop()
                counts[a] = c

    rec([], 1)
    return FactorialMeasure(k, tuple(out))


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out

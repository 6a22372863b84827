"""Exact joint laws on finite product spaces and conditioning by partitions.

A law is a finitely supported map from outcomes to :class:`fractions.Fraction`.
Sequence laws (:class:`JointLaw`) key on tuples of symbols; matrix laws
(:class:`MatrixLaw`) key on tuples of row tuples.  Conditioning fields are
partitions of the outcome space generated by a statistic; every quantity in
the verification path stays rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Symbol = Hashable
Outcome = tuple


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact laws: %r" % (value,))
    return Fraction(value)


def _check_alphabet(alphabet: Sequence[Symbol]) -> tuple:
    alphabet = tuple(alphabet)
    if not alphabet:
        raise DomainError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise DomainError("alphabet has duplicate symbols: %r" % (alphabet,))
    return alphabet


class _FiniteLaw:
    """Shared behaviour of sequence and matrix laws."""

    alphabet: tuple
    probs: dict

    def _normalize(self, probs: Mapping) -> dict:
        clean = {}
        total = Fraction(0)
        for x, p in probs.items():
            p = as_fraction(p)
            if p < 0:
                raise DomainError("negative probability %s at %r" % (p, x))
            self._check_outcome(x)
            if p:
                clean[x] = clean.get(x, Fraction(0)) + p
            total += p
        if total != 1:
            raise DomainError("total mass is %s, expected 1" % total)
        return {x: clean[x] for x in sorted(clean, key=self.sort_key)}

    def _check_outcome(self, x) -> None:
        raise NotImplementedError

    def sort_key(self, x) -> tuple:
        raise NotImplementedError

    def space(self) -> Iterator:
        raise NotImplementedError

    def prob(self, x) -> Fraction:
        return self.probs.get(x, Fraction(0))

    def support(self) -> list:
        return list(self.probs)

    def expectation(self, rv: Mapping | Callable) -> Fraction:
        get = rv.get if isinstance(rv, Mapping) else None
        total = Fraction(0)
        for x, p in self.probs.items():
            total += p * (get(x, 0) if get else rv(x))
        return total

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._shape() == other._shape() and self.probs == other.probs

    __hash__ = None  # type: ignore[assignment]

    def _shape(self) -> tuple:
        raise NotImplementedError


class JointLaw(_FiniteLaw):
    """Exact law of ``(xi_1, ..., xi_n)`` over a finite alphabet."""

    def __init__(self, alphabet: Sequence[Symbol], length: int, probs: Mapping):
        self.alphabet = _check_alphabet(alphabet)
        if length < 1:
            raise DomainError("length must be >= 1")
        self.length = int(length)
        self._pos = {a: i for i, a in enumerate(self.alphabet)}
        self.probs = self._normalize(probs)

    def _check_outcome(self, x) -> None:
        if not isinstance(x, tuple) or len(x) != self.length:
            raise DomainError("outcome %r does not have length %d" % (x, self.length))
        for a in x:
            if a not in self._pos:
                raise DomainError("symbol %r not in alphabet" % (a,))

    def sort_key(self, x) -> tuple:
        return tuple(self._pos[a] for a in x)

    def space(self) -> Iterator[tuple]:
        return itertools.product(self.alphabet, repeat=self.length)

    def _shape(self) -> tuple:
        return (self.alphabet, self.length)

    def __repr__(self) -> str:
        return "JointLaw(alphabet=%r, length=%d, support=%d)" % (
            self.alphabet, self.length, len(self.probs))

    @classmethod
    def point_mass(cls, alphabet: Sequence[Symbol], outcome: Sequence[Symbol]) -> "JointLaw":
        outcome = tuple(outcome)
        return cls(alphabet, len(outcome), {outcome: 1})


class MatrixLaw(_FiniteLaw):
    """Exact law of an ``rows x cols`` random matrix; outcomes are tuples of rows."""

    def __init__(self, alphabet: Sequence[Symbol], rows: int, cols: int, probs: Mapping):
        self.alphabet = _check_alphabet(alphabet)
        if rows < 1 or cols < 1:
            raise DomainError("matrix dimensions must be >= 1")
        self.rows, self.cols = int(rows), int(cols)
        self._pos = {a: i for i, a in enumerate(self.alphabet)}
        self.probs = self._normalize(probs)

    def _check_outcome(self, x) -> None:
        if not isinstance(x, tuple) or len(x) != self.rows:
            raise DomainError("matrix outcome %r does not have %d rows" % (x, self.rows))
        for row in x:
            if not isinstance(row, tuple) or len(row) != self.cols:
                raise DomainError("row %r does not have %d columns" % (row, self.cols))
            for a in row:
                if a not in self._pos:
                    raise DomainError("symbol %r not in alphabet" % (a,))

    def sort_key(self, x) -> tuple:
        return tuple(self._pos[a] for row in x for a in row)

    def space(self) -> Iterator[tuple]:
        n, m = self.rows, self.cols
        for flat in itertools.product(self.alphabet, repeat=n * m):
            yield tuple(flat[i * m:(i + 1) * m] for i in range(n))

    def _shape(self) -> tuple:
        return (self.alphabet, self.rows, self.cols)

    def __repr__(self) -> str:
        return "MatrixLaw(alphabet=%r, rows=%d, cols=%d, support=%d)" % (
            self.alphabet, self.rows, self.cols, len(self.probs))

    @classmethod
    def point_mass(cls, alphabet: Sequence[Symbol], matrix: Sequence[Sequence[Symbol]]) -> "MatrixLaw":
        matrix = tuple(tuple(row) for row in matrix)
        return cls(alphabet, len(matrix), len(matrix[0]), {matrix: 1})


class RandomVariable(dict):
    """A rational-valued function of the outcome, stored on a finite domain."""

    @classmethod
    def of(cls, law: _FiniteLaw, fn: Callable[[Any], Any], domain: Iterable | None = None) -> "RandomVariable":
        dom = law.support() if domain is None else domain
        return cls((x, as_fraction(fn(x))) for x in dom)


def pushforward(law: JointLaw, fn: Callable[[tuple], tuple], length: int, alphabet=None) -> JointLaw:
    out: dict = {}
    for x, p in law.probs.items():
        y = fn(x)
        out[y] = out.get(y, Fraction(0)) + p
    return JointLaw(law.alphabet if alphabet is None else alphabet, length, out)


def _check_perm(perm: Sequence[int], n: int) -> tuple:
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise DomainError("%r is not a permutation of 0..%d" % (perm, n - 1))
    return perm


def apply_perm(x: tuple, perm: Sequence[int]) -> tuple:
    """Reindex a tuple: position ``i`` of the result holds ``x[perm[i]]``."""
    return tuple(x[j] for j in perm)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """The permutation equal to applying ``p`` and then ``q`` via :func:`permute`."""
    return tuple(p[j] for j in q)


def swap(n: int, i: int, j: int) -> tuple:
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)


def permute(law: JointLaw, perm: Sequence[int]) -> JointLaw:
    """Law of ``(xi_{perm[0]}, ..., xi_{perm[n-1]})``; indices are 0-based."""
    perm = _check_perm(perm, law.length)
    return pushforward(law, lambda x: apply_perm(x, perm), law.length)


def marginal(law: JointLaw, index_set: Sequence[int]) -> JointLaw:
    """Pushforward onto the coordinates in ``index_set`` (0-based, increasing)."""
    idx = tuple(index_set)
    if not idx:
        raise DomainError("index set must be nonempty")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise DomainError("index set must be strictly increasing: %r" % (idx,))
    if idx[0] < 0 or idx[-1] >= law.length:
        raise DomainError("index out of range: %r" % (idx,))
    return pushforward(law, lambda x: tuple(x[i] for i in idx), len(idx))


# ---------------------------------------------------------------------------
# Statistics generating conditioning fields.  Indices follow the 1-based
# convention of the empirical measures: EmpiricalAt(k) is eta_k, the average of
# the first k point masses, and TailFrom(k) is (xi_{k+1}, ..., xi_n).


def _counts(alphabet: tuple, symbols: Iterable) -> tuple:
    pos = {a: i for i, a in enumerate(alphabet)}
    c = [0] * len(alphabet)
    for a in symbols:
        c[pos[a]] += 1
    return tuple(c)


def _seq_len(law) -> int:
    if not isinstance(law, JointLaw):
        raise DomainError("statistic requires a sequence law")
    return law.length


def _grid(law) -> tuple[int, int]:
    if not isinstance(law, MatrixLaw):
        raise DomainError("statistic requires a matrix law")
    return law.rows, law.cols


class StatisticSpec:
    def validate(self, law) -> None:
        raise NotImplementedError

    def value(self, x, law) -> Hashable:
        raise NotImplementedError


@dataclass(frozen=True)
class EmpiricalAt(StatisticSpec):
    k: int

    def validate(self, law) -> None:
        if not 1 <= self.k <= _seq_len(law):
            raise DomainError("EmpiricalAt(%d) out of range" % self.k)

    def value(self, x, law):
        # Equal counts over the first k coordinates <=> equal eta_k.
        return _counts(law.alphabet, x[:self.k])


@dataclass(frozen=True)
class TailFrom(StatisticSpec):
    k: int

    def validate(self, law) -> None:
        if not 0 <= self.k <= _seq_len(law):
            raise DomainError("TailFrom(%d) out of range" % self.k)

    def value(self, x, law):
        return x[self.k:]


@dataclass(frozen=True)
class PrefixCoords(StatisticSpec):
    k: int

    def validate(self, law) -> None:
        if not 0 <= self.k <= _seq_len(law):
            raise DomainError("PrefixCoords(%d) out of range" % self.k)

    def value(self, x, law):
        return x[:self.k]


@dataclass(frozen=True)
class CountsTotal(StatisticSpec):
    n: int

    def validate(self, law) -> None:
        if not 0 <= self.n <= _seq_len(law):
            raise DomainError("CountsTotal(%d) out of range" % self.n)

    def value(self, x, law):
        return _counts(law.alphabet, x[:self.n])


@dataclass(frozen=True)
class SingleCoord(StatisticSpec):
    k: int

    def validate(self, law) -> None:
        if not 1 <= self.k <= _seq_len(law):
            raise DomainError("SingleCoord(%d) out of range" % self.k)

    def value(self, x, law):
        return x[self.k - 1]


def _block_counts(alphabet: tuple, x: tuple, n: int, m: int) -> tuple:
    return _counts(alphabet, (a for row in x[:n] for a in row[:m]))


@dataclass(frozen=True)
class QuadrantEmpirical(StatisticSpec):
    """All eta_{u,v} with u >= n, v >= m: the shifted family of empirical measures."""

    n: int
    m: int

    def validate(self, law) -> None:
        rows, cols = _grid(law)
        if not (1 <= self.n <= rows and 1 <= self.m <= cols):
            raise DomainError("QuadrantEmpirical(%d, %d) out of range" % (self.n, self.m))

    def value(self, x, law):
        return tuple(_block_counts(law.alphabet, x, u, v)
                     for u in range(self.n, law.rows + 1)
                     for v in range(self.m, law.cols + 1))


@dataclass(frozen=True)
class ComplementBlock(StatisticSpec):
    """Every entry outside the top-left n x m block."""

    n: int
    m: int

    def validate(self, law) -> None:
        rows, cols = _grid(law)
        if not (0 <= self.n <= rows and 0 <= self.m <= cols):
            raise DomainError("ComplementBlock(%d, %d) out of range" % (self.n, self.m))

    def value(self, x, law):
        return tuple(a for i, row in enumerate(x) for j, a in enumerate(row)
                     if i >= self.n or j >= self.m)


@dataclass(frozen=True)
class Conjunction(StatisticSpec):
    parts: tuple

    def __init__(self, *parts: StatisticSpec):
        if len(parts) == 1 and not isinstance(parts[0], StatisticSpec):
            parts = tuple(parts[0])
        object.__setattr__(self, "parts", tuple(parts))

    def validate(self, law) -> None:
        for part in self.parts:
            part.validate(law)

    def value(self, x, law):
        return tuple(part.value(x, law) for part in self.parts)


@dataclass(frozen=True)
class ConditioningField:
    """A partition of the outcome space; blocks are ordered by their least outcome."""

    blocks: tuple
    generator: StatisticSpec | None = None
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for i, block in enumerate(self.blocks):
            for x in block:
                self._index[x] = i

    def block_of(self, x) -> int:
        return self._index[x]

    def outcomes(self) -> Iterator:
        for block in self.blocks:
            yield from block

    def refines(self, other: "ConditioningField") -> bool:
        """True when every block of ``self`` lies inside one block of ``other``."""
        for block in self.blocks:
            if len({other.block_of(x) for x in block}) != 1:
                return False
        return True

    def is_measurable(self, rv: Mapping) -> bool:
        """True when ``rv`` is constant on every block (missing values read as 0)."""
        for block in self.blocks:
            if len({rv.get(x, Fraction(0)) for x in block}) > 1:
                return False
        return True


def field_from(law: _FiniteLaw, spec: StatisticSpec, support_only: bool = False) -> ConditioningField:
    """Partition outcomes by the exact value of ``spec``.

    By default the whole outcome space is partitioned; ``support_only``
    restricts to positive-probability outcomes, which is all the checkers need.
    """
    spec.validate(law)
    groups: dict = {}
    outcomes = law.support() if support_only else law.space()
    for x in outcomes:
        groups.setdefault(spec.value(x, law), []).append(x)
    blocks = tuple(tuple(sorted(g, key=law.sort_key)) for g in groups.values())
    blocks = tuple(sorted(blocks, key=lambda b: law.sort_key(b[0])))
    return ConditioningField(blocks, spec)


def block_masses(law: _FiniteLaw, fld: ConditioningField) -> list[Fraction]:
    return [sum((law.prob(x) for x in block), Fraction(0)) for block in fld.blocks]


def cond_expectation(law: _FiniteLaw, rv: Mapping, fld: ConditioningField) -> RandomVariable:
    """E(rv | field), block-constant; zero-probability blocks get the value 0."""
    out = RandomVariable()
    for block in fld.blocks:
        mass = Fraction(0)
        acc = Fraction(0)
        for x in block:
            p = law.prob(x)
            if p:
                mass += p
                acc += p * rv.get(x, 0)
        value = acc / mass if mass else Fraction(0)
        for x in block:
            out[x] = value
    return out


def equal_in_distribution(a: JointLaw, b: JointLaw):
    """Exact comparison of two probability maps, reported as a CheckReport."""
    from .report import CheckReport, Witness, outcome_doc

    if a.alphabet != b.alphabet or a.length != b.length:
        raise DomainError("laws differ in alphabet or length")
    keys = sorted(set(a.probs) | set(b.probs), key=a.sort_key)
    witnesses = [Witness({"outcome": outcome_doc(x)}, "P", a.prob(x), b.prob(x))
                 for x in keys if a.prob(x) != b.prob(x)]
    return CheckReport("equal_in_distribution", witnesses, checked_count=len(keys))

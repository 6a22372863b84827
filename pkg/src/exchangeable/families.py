"""Constructors for example laws and stationary process models.

Every constructor returns an exact :class:`~exchangeable.core.JointLaw`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .core import DomainError, JointLaw, Symbol, as_fraction, marginal
from .empirical import Measure, count_measure_factorial

COUNTEREXAMPLE_ALPHABET = (0, 1, 2)


def iid_law(base: Measure, n: int) -> JointLaw:
    if not base.is_probability():
        raise DomainError("base measure must have total mass 1")
    probs = {}
    for x in itertools.product(base.alphabet, repeat=n):
        p = Fraction(1)
        for a in x:
            p *= base[a]
        if p:
            probs[x] = p
    return JointLaw(base.alphabet, n, probs)


def mixture_law(components: Sequence[tuple]) -> JointLaw:
    """Convex combination of ``(weight, law)`` pairs."""
    if not components:
        raise DomainError("mixture needs at least one component")
    first = components[0][1]
    total = Fraction(0)
    probs: dict = {}
    for w, law in components:
        w = as_fraction(w)
        if w < 0:
            raise DomainError("negative mixture weight")
        if law.alphabet != first.alphabet or law.length != first.length:
            raise DomainError("mixture components differ in alphabet or length")
        total += w
        for x, p in law.probs.items():
            probs[x] = probs.get(x, Fraction(0)) + w * p
    if total != 1:
        raise DomainError("mixture weights sum to %s" % total)
    return JointLaw(first.alphabet, first.length, probs)


def _falling(total: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= total - i
    return out


def urn_law(counts: Measure, n: int) -> JointLaw:
    """Law of ``n`` sequential draws without replacement from ``counts``."""
    total = int(counts.total)
    if n > total:
        raise DomainError("cannot draw %d items from an urn of %d" % (n, total))
    fm = count_measure_factorial(counts, n)
    denom = _falling(total, n)
    return JointLaw(counts.alphabet, n, {t: Fraction(v, denom) for t, v in fm.masses})


def polya_law(counts: Measure, reinforcement: int, n: int) -> JointLaw:
    """Polya urn: draw, return the ball, and add ``reinforcement`` copies of it."""
    if not counts.is_integer():
        raise DomainError("urn counts must be integers")
    if counts.total < 1:
        raise DomainError("empty urn")
    if reinforcement < 0:
        raise DomainError("reinforcement must be nonnegative")
    alphabet = counts.alphabet
    probs: dict = {}

    def rec(prefix, urn, p):
        if len(prefix) == n:
            probs[tuple(prefix)] = p
            return
        total = sum(urn.values())
        for a in alphabet:
            if urn[a]:
                urn[a] += reinforcement
                prefix.append(a)
                rec(prefix, urn, p * Fraction(urn[a] - reinforcement, total))
                prefix.pop()
                urn[a] -= reinforcement

    rec([], {a: int(v) for a, v in counts.masses.items()}, Fraction(1))
    return JointLaw(alphabet, n, probs)


@dataclass(frozen=True)
class MarkovSpec:
    init: Measure
    kernel: Mapping  # symbol -> Measure

    def __post_init__(self):
        if not self.init.is_probability():
            raise DomainError("initial law must have total mass 1")
        alphabet = self.init.alphabet
        if set(self.kernel) != set(alphabet):
            raise DomainError("kernel must have a row for every symbol")
        for a, row in self.kernel.items():
            if row.alphabet != alphabet or not row.is_probability():
                raise DomainError("kernel row %r is not a probability on the alphabet" % (a,))

    @property
    def alphabet(self) -> tuple:
        return self.init.alphabet


def markov_spec(alphabet: Sequence[Symbol], init: Mapping, kernel: Mapping[Symbol, Mapping]) -> MarkovSpec:
    alphabet = tuple(alphabet)
    return MarkovSpec(Measure(alphabet, init), {a: Measure(alphabet, kernel[a]) for a in alphabet})


def inhomogeneous_markov_law(init: Measure, kernels: Sequence[Mapping]) -> JointLaw:
    """Chain using ``kernels[i]`` for the step from coordinate ``i`` to ``i + 1`` (0-based)."""
    alphabet = init.alphabet
    probs = {(a,): p for a, p in init.masses.items() if p}
    for kernel in kernels:
        nxt = {}
        for x, p in probs.items():
            for b, q in kernel[x[-1]].masses.items():
                if q:
                    nxt[x + (b,)] = p * q
        probs = nxt
    return JointLaw(alphabet, len(kernels) + 1, probs)


def markov_law(spec: MarkovSpec, n: int) -> JointLaw:
    return inhomogeneous_markov_law(spec.init, [spec.kernel] * (n - 1))


def stationary_distribution(kernel: Mapping[Symbol, Measure], alphabet: Sequence[Symbol]) -> Measure:
    """Left fixed point ``pi K = pi`` by exact Gaussian elimination.

    Requires a unique fixed point (e.g. an irreducible chain).
    """
    alphabet = tuple(alphabet)
    s = len(alphabet)
    # Rows: (K^T - I) pi = 0 for all but the last symbol, plus sum(pi) = 1.
    a = [[kernel[alphabet[j]][alphabet[i]] - (1 if i == j else 0) for j in range(s)]
         for i in range(s - 1)]
    a.append([Fraction(1)] * s)
    b = [Fraction(0)] * (s - 1) + [Fraction(1)]
    for col in range(s):
        pivot = next((r for r in range(col, s) if a[r][col] != 0), None)
        if pivot is None:
            raise DomainError("kernel has no unique stationary distribution")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        for r in range(s):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return Measure(alphabet, {alphabet[i]: b[i] / a[i][i] for i in range(s)})


def counterexample_law(n: int) -> JointLaw:
    """Exchangeable but non-Markov law on ``{0, 1, 2}``.

    A label ``alpha`` is uniform on ``{-1, 0, 1}``: ``alpha = -1`` gives the
    all-ones path, ``alpha = 0`` the all-zeros path, and ``alpha = 1`` iid
    coordinates uniform on ``{1, 2}``.  The uniform variables of the
    generative description enter only through the event ``{b < 1/2}``, so a
    fair coin replaces them without changing the law.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    alphabet = COUNTEREXAMPLE_ALPHABET
    third = Fraction(1, 3)
    ones = JointLaw.point_mass(alphabet, (1,) * n)
    zeros = JointLaw.point_mass(alphabet, (0,) * n)
    coin = iid_law(Measure(alphabet, {1: Fraction(1, 2), 2: Fraction(1, 2)}), n)
    return mixture_law([(third, ones), (third, zeros), (third, coin)])


# ---------------------------------------------------------------------------
# Stationary models


class ConsistencyError(DomainError):
    def __init__(self, length: int, message: str = ""):
        self.length = length
        super().__init__(message or "window laws are inconsistent at length %d" % length)


@dataclass(frozen=True)
class StationaryModel:
    """A stationary sequence described by its finite-window laws."""

    alphabet: tuple
    window_law: Callable[[int], JointLaw]
    kind: str = "explicit"
    max_length: int | None = None

    def check_consistency(self, max_length: int) -> None:
        """Raise :class:`ConsistencyError` at the first inconsistent window length."""
        for L in range(2, max_length + 1):
            w = self.window_law(L)
            prev = self.window_law(L - 1)
            head = marginal(w, range(L - 1))
            tail = marginal(w, range(1, L))
            if head != prev or tail != prev:
                raise ConsistencyError(L)


def _cached(fn: Callable[[int], JointLaw]) -> Callable[[int], JointLaw]:
    return lru_cache(maxsize=None)(fn)


def iid_model(base: Measure) -> StationaryModel:
    return StationaryModel(base.alphabet, _cached(lambda L: iid_law(base, L)), "iid")


def mixture_model(components: Sequence[tuple]) -> StationaryModel:
    """Mixture of iid sequences; ``components`` are ``(weight, base Measure)`` pairs."""
    alphabet = components[0][1].alphabet
    return StationaryModel(
        alphabet,
        _cached(lambda L: mixture_law([(w, iid_law(m, L)) for w, m in components])),
        "mixture")


def markov_model(spec: MarkovSpec) -> StationaryModel:
    return StationaryModel(spec.alphabet, _cached(lambda L: markov_law(spec, L)), "markov")


def counterexample_model() -> StationaryModel:
    return StationaryModel(COUNTEREXAMPLE_ALPHABET, _cached(counterexample_law), "mixture")


def explicit_model(law: JointLaw) -> StationaryModel:
    """Model whose windows are the leading marginals of a single finite law."""

    def window(L: int) -> JointLaw:
        if L > law.length:
            raise DomainError("explicit model only defines windows up to %d" % law.length)
        return marginal(law, range(L))

    return StationaryModel(law.alphabet, _cached(window), "explicit", law.length)


def extend_backward_law(model: StationaryModel, L: int, b: int) -> JointLaw:
    """Law of the window ``(xi~_{-b+1}, ..., xi~_0, xi~_1, ..., xi~_L)``.

    By stationarity of the two-sided extension this is the window law of
    length ``L + b``; consistency of the model is verified first.
    """
    if L < 1 or b < 0:
        raise DomainError("need L >= 1 and b >= 0")
    model.check_consistency(L + b)
    return model.window_law(L + b)


def backward_conditional(model: StationaryModel, future: Sequence[Symbol]) -> dict:
    """Exact law of ``xi~_0`` given ``(xi~_1, ..., xi~_L) = future``."""
    future = tuple(future)
    L = len(future)
    p_future = model.window_law(L).prob(future)
    if p_future == 0:
        raise DomainError("future %r has probability zero" % (future,))
    joint = model.window_law(L + 1)
    return {a: joint.prob((a,) + future) / p_future for a in model.alphabet}


def backward_sample(model: StationaryModel, future: Sequence[Symbol], u) -> Symbol:
    """Inverse-CDF draw (alphabet order) of ``xi~_0`` given the future, driven by ``u`` in [0, 1)."""
    u = as_fraction(u)
    if not 0 <= u < 1:
        raise DomainError("uniform variable must lie in [0, 1)")
    cond = backward_conditional(model, future)
    cum = Fraction(0)
    for a in model.alphabet:
        cum += cond[a]
        if u < cum:
            return a
    raise AssertionError("conditional law does not sum to 1")


def extend_backward_path(model: StationaryModel, path: Sequence[Symbol], uniforms: Sequence) -> tuple:
    """Prepend one symbol per uniform, each drawn given everything to its right."""
    path = tuple(path)
    for u in uniforms:
        path = (backward_sample(model, path, u),) + path
    return path


def decompose_adjacent(perm: Sequence[int]) -> list[int]:
    """Adjacent swaps ``i`` (positions ``i, i+1``, 0-based) building ``perm``.

    Applying :func:`~exchangeable.core.permute` with ``swap(n, i, i+1)`` for
    each returned ``i`` in order equals ``permute(law, perm)``.
    """
    arr = list(perm)
    if sorted(arr) != list(range(len(arr))):
        raise DomainError("%r is not a permutation" % (perm,))
    swaps = []
    # Bubble sort perm to the identity; the reversed swap list rebuilds perm.
    for end in range(len(arr) - 1, 0, -1):
        for i in range(end):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                swaps.append(i)
    return swaps[::-1]

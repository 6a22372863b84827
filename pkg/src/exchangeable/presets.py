"""Named laws for demos and the command line.

A descriptor document ``{"preset": NAME, "params": {...}}`` selects one of
these; parameters are optional and rationals may be given as ``"a/b"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable

from .core import DomainError, JointLaw, MatrixLaw
from .empirical import Measure
from .families import (counterexample_law, iid_law, markov_law, markov_spec, mixture_law,
                       polya_law, stationary_distribution, urn_law)
from .matrix import iid_matrix_law, label_matrix_law

BINARY = ("a", "b")


def _q(v: Any) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.strip())


def _measure(alphabet, masses: dict) -> Measure:
    return Measure(alphabet, {a: _q(v) for a, v in masses.items()})


def _alphabet(params: dict, default=BINARY) -> tuple:
    return tuple(params.get("alphabet", default))


def _iid(n, p):
    alphabet = _alphabet(p)
    base = _measure(alphabet, p["probs"]) if "probs" in p else Measure.uniform(alphabet)
    return iid_law(base, n or 3)


def _mixture(n, p):
    alphabet = _alphabet(p)
    comps = p.get("components", [["1/2", {"a": "1/4", "b": "3/4"}], ["1/2", {"a": "3/4", "b": "1/4"}]])
    return mixture_law([(_q(w), iid_law(_measure(alphabet, m), n or 3)) for w, m in comps])


def _urn(n, p):
    alphabet = _alphabet(p)
    counts = _measure(alphabet, p.get("counts", {"a": 2, "b": 1}))
    return urn_law(counts, n or int(counts.total))


def _polya(n, p):
    alphabet = _alphabet(p)
    counts = _measure(alphabet, p.get("counts", {"a": 1, "b": 1}))
    return polya_law(counts, int(p.get("reinforcement", 1)), n or 3)


def _markov(n, p):
    alphabet = _alphabet(p)
    kernel = p.get("kernel", {"a": {"a": "1/2", "b": "1/2"}, "b": {"a": 1, "b": 0}})
    kernel = {a: {b: _q(v) for b, v in row.items()} for a, row in kernel.items()}
    if "init" in p:
        init = {a: _q(v) for a, v in p["init"].items()}
    else:
        rows = {a: Measure(alphabet, kernel[a]) for a in alphabet}
        init = stationary_distribution(rows, alphabet).masses
    return markov_law(markov_spec(alphabet, init, kernel), n or 3)


def _counterexample(n, p):
    return counterexample_law(n or 4)


def _point(n, p):
    outcome = tuple(p.get("outcome", ("a", "b")))
    return JointLaw.point_mass(_alphabet(p), outcome)


def _matrix_iid(n, p):
    alphabet = _alphabet(p, (0, 1))
    size = n or 2
    return iid_matrix_law(Measure.uniform(alphabet), int(p.get("rows", size)), int(p.get("cols", size)))


def _matrix_labels(n, p):
    size = n or 2
    half = Fraction(1, 2)
    return label_matrix_law({0: half, 1: half}, {0: half, 1: half}, lambda a, b: a ^ b,
                            (0, 1), int(p.get("rows", size)), int(p.get("cols", size)))


def _matrix_point(n, p):
    matrix = p.get("matrix", [[0, 1], [1, 1]])
    return MatrixLaw.point_mass((0, 1), matrix)


PRESETS: dict[str, Callable[[int | None, dict], Any]] = {
    "iid": _iid,
    "mixture": _mixture,
    "urn": _urn,
    "polya": _polya,
    "markov": _markov,
    "counterexample": _counterexample,
    "point": _point,
    "matrix-iid": _matrix_iid,
    "matrix-labels": _matrix_labels,
    "matrix-point": _matrix_point,
}


def build_preset(name: str, n: int | None = None, params: dict | None = None):
    try:
        builder = PRESETS[name]
    except KeyError:
        raise DomainError("unknown preset %r; choose from %s" % (name, ", ".join(PRESETS))) from None
    return builder(n, dict(params or {}))

"""Separately exchangeable random matrices.

Matrix outcomes are tuples of row tuples.  Row and column permutations are
0-based index tuples; ``permute_matrix(law, p, q)`` is the law of
``(X[p[i]][q[j]])``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .core import (ComplementBlock, Conjunction, DomainError, JointLaw, MatrixLaw,
                   QuadrantEmpirical, _check_perm, as_fraction, field_from, swap)
from .empirical import Measure, TestFunction, indicators
from .properties import check_exchangeable, check_reverse_martingale, check_stationary
from .report import CheckReport, Witness, outcome_doc

FIELD_VARIANTS = ("block-complement", "quadrant")


def iid_matrix_law(base: Measure, rows: int, cols: int) -> MatrixLaw:
    probs = {}
    for flat in itertools.product(base.alphabet, repeat=rows * cols):
        p = Fraction(1)
        for a in flat:
            p *= base[a]
        if p:
            probs[tuple(flat[i * cols:(i + 1) * cols] for i in range(rows))] = p
    return MatrixLaw(base.alphabet, rows, cols, probs)


def label_matrix_law(row_labels: Mapping, col_labels: Mapping, entry: Callable,
                     alphabet: Sequence, rows: int, cols: int) -> MatrixLaw:
    """``X[i][j]`` drawn from ``entry(alpha_i, beta_j)`` given iid row and column labels.

    ``row_labels`` and ``col_labels`` map label -> probability.  ``entry``
    returns either a symbol or a mapping symbol -> probability; entries are
    conditionally independent given the labels.
    """
    alphabet = tuple(alphabet)
    probs: dict = {}
    for alphas in itertools.product(row_labels, repeat=rows):
        pa = math.prod((as_fraction(row_labels[a]) for a in alphas), start=Fraction(1))
        if not pa:
            continue
        for betas in itertools.product(col_labels, repeat=cols):
            pb = math.prod((as_fraction(col_labels[b]) for b in betas), start=Fraction(1))
            if not pb:
                continue
            cells = []
            for a in alphas:
                for b in betas:
                    e = entry(a, b)
                    cells.append(e if isinstance(e, Mapping) else {e: 1})
            for flat in itertools.product(*[list(c.items()) for c in cells]):
                p = pa * pb
                for _, q in flat:
                    p *= as_fraction(q)
                if not p:
                    continue
                syms = [s for s, _ in flat]
                x = tuple(tuple(syms[i * cols:(i + 1) * cols]) for i in range(rows))
                probs[x] = probs.get(x, Fraction(0)) + p
    return MatrixLaw(alphabet, rows, cols, probs)


def matrix_mixture(components: Sequence[tuple]) -> MatrixLaw:
    first = components[0][1]
    probs: dict = {}
    for w, law in components:
        w = as_fraction(w)
        for x, p in law.probs.items():
            probs[x] = probs.get(x, Fraction(0)) + w * p
    return MatrixLaw(first.alphabet, first.rows, first.cols, probs)


def _reindex(x: tuple, rp: Sequence[int], cp: Sequence[int]) -> tuple:
    return tuple(tuple(x[i][j] for j in cp) for i in rp)


def _preimage(x: tuple, rp: Sequence[int], cp: Sequence[int]) -> tuple:
    z = [[None] * len(cp) for _ in rp]
    for i, r in enumerate(rp):
        for j, c in enumerate(cp):
            z[r][c] = x[i][j]
    return tuple(tuple(row) for row in z)


def permute_matrix(law: MatrixLaw, row_perm: Sequence[int], col_perm: Sequence[int]) -> MatrixLaw:
    rp = _check_perm(row_perm, law.rows)
    cp = _check_perm(col_perm, law.cols)
    probs: dict = {}
    for x, p in law.probs.items():
        y = _reindex(x, rp, cp)
        probs[y] = probs.get(y, Fraction(0)) + p
    return MatrixLaw(law.alphabet, law.rows, law.cols, probs)


def check_sep_exchangeable(law: MatrixLaw, brute_force: bool = False) -> CheckReport:
    """Invariance under independent row and column permutations."""
    N, M = law.rows, law.cols
    ident_r, ident_c = tuple(range(N)), tuple(range(M))
    if brute_force:
        pairs = [(rp, cp) for rp in itertools.permutations(ident_r)
                 for cp in itertools.permutations(ident_c) if (rp, cp) != (ident_r, ident_c)]
    else:
        pairs = ([(swap(N, i, i + 1), ident_c) for i in range(N - 1)]
                 + [(ident_r, swap(M, j, j + 1)) for j in range(M - 1)])
    witnesses = []
    checked = 0
    for rp, cp in pairs:
        name = "rows%s cols%s" % (list(rp), list(cp))
        for x in law.support():
            checked += 1
            p, q = law.prob(x), law.prob(_preimage(x, rp, cp))
            if p != q:
                witnesses.append(Witness({"outcome": outcome_doc(x)}, name, p, q))
    return CheckReport("sep_exchangeable", witnesses, checked,
                       details={"mode": "brute-force" if brute_force else "adjacent",
                                "permutation_pairs": len(pairs)})


def matrix_field(law: MatrixLaw, n: int, m: int, variant: str = "block-complement", support_only: bool = True):
    """Conditioning field at grid point (n, m).

    ``quadrant``: sigma(eta_{u,v} : u >= n, v >= m).
    ``block-complement``: sigma(eta_{n,m}, every entry outside the top-left n x m block).
    """
    if variant == "quadrant":
        spec = QuadrantEmpirical(n, m)
    elif variant == "block-complement":
        spec = Conjunction(QuadrantEmpirical(n, m), ComplementBlock(n, m))
    else:
        raise DomainError("unknown field variant %r" % (variant,))
    return field_from(law, spec, support_only=support_only)


def _block_integral(x: tuple, k: int, l: int, fv: dict) -> Fraction:
    return sum((fv[x[i][j]] for i in range(k) for j in range(l)), Fraction(0)) / (k * l)


def check_reverse_martingale_2d(law: MatrixLaw, field_variant: str = "block-complement",
                                test_functions: Sequence[TestFunction] | None = None) -> CheckReport:
    """E(eta_{k,l} f | field at (n, m)) = eta_{n,m} f for all (k, l) <= (n, m)."""
    N, M = law.rows, law.cols
    if N < 2 or M < 2:
        raise DomainError("2-D reverse-martingale check needs at least a 2x2 grid")
    fs = list(test_functions) if test_functions else indicators(law.alphabet)
    witnesses = []
    checked = 0
    for n in range(2, N + 1):
        for m in range(2, M + 1):
            fld = matrix_field(law, n, m, field_variant)
            for block in fld.blocks:
                rep = block[0]
                mass = sum((law.prob(x) for x in block), Fraction(0))
                for f in fs:
                    fv = f.as_dict()
                    target = _block_integral(rep, n, m, fv)
                    for k in range(1, n + 1):
                        for l in range(1, m + 1):
                            if (k, l) == (n, m):
                                continue
                            checked += 1
                            lhs = sum((law.prob(x) * _block_integral(x, k, l, fv) for x in block),
                                      Fraction(0)) / mass
                            if lhs != target:
                                witnesses.append(Witness(
                                    {"n": n, "m": m, "k": k, "l": l, "block": outcome_doc(rep)},
                                    f.name, lhs, target))
    return CheckReport("reverse_martingale_2d", witnesses, checked,
                       details={"field_variant": field_variant})


def field_refinement(law: MatrixLaw) -> dict:
    """For each (n, m): does block-complement refine quadrant, and are they equal?"""
    out = {}
    for n in range(2, law.rows + 1):
        for m in range(2, law.cols + 1):
            fine = matrix_field(law, n, m, "block-complement", support_only=False)
            coarse = matrix_field(law, n, m, "quadrant", support_only=False)
            out["%d,%d" % (n, m)] = {"refines": fine.refines(coarse),
                                    "equal": len(fine.blocks) == len(coarse.blocks) and fine.refines(coarse),
                                    "blocks": [len(fine.blocks), len(coarse.blocks)]}
    return out


def marginal_views(law: MatrixLaw, n: int | None = None, m: int | None = None) -> JointLaw:
    """Column-tuple sequence (Y^n_1..Y^n_M) for ``n``, or row-tuple sequence (Z^m_1..Z^m_N) for ``m``."""
    if (n is None) == (m is None):
        raise DomainError("give exactly one of n or m")
    if n is not None:
        if not 1 <= n <= law.rows:
            raise DomainError("n=%d out of range" % n)
        tuple_alphabet = tuple(itertools.product(law.alphabet, repeat=n))
        view = lambda x: tuple(tuple(x[i][j] for i in range(n)) for j in range(law.cols))
        length = law.cols
    else:
        if not 1 <= m <= law.cols:
            raise DomainError("m=%d out of range" % m)
        tuple_alphabet = tuple(itertools.product(law.alphabet, repeat=m))
        view = lambda x: tuple(tuple(x[i][:m]) for i in range(law.rows))
        length = law.rows
    probs: dict = {}
    for x, p in law.probs.items():
        y = view(x)
        probs[y] = probs.get(y, Fraction(0)) + p
    return JointLaw(tuple_alphabet, length, probs)


def _view_checks(view: JointLaw) -> tuple:
    if view.length < 2:
        return None, None
    return check_reverse_martingale(view), check_stationary(view)


def check_marginal_characterisation(law: MatrixLaw) -> CheckReport:
    """Both directions of: separately exchangeable iff every row/column view is a
    stationary sequence with reverse-martingale empirical measures.

    Fails only on an implication violation.
    """
    sep = check_sep_exchangeable(law)
    views = {}
    for n in range(1, law.rows + 1):
        views["Y%d" % n] = _view_checks(marginal_views(law, n=n))
    for m in range(1, law.cols + 1):
        views["Z%d" % m] = _view_checks(marginal_views(law, m=m))
    ok = lambda r: r is None or r.passed
    all_views = all(ok(a) and ok(b) for a, b in views.values())
    forward = "vacuous" if not sep.passed else ("holds" if all_views else "VIOLATED")
    backward = "vacuous" if not all_views else ("holds" if sep.passed else "VIOLATED")
    witnesses = []
    if forward == "VIOLATED":
        name, w = next((k, r.first) for k, pair in views.items() for r in pair if not ok(r))
        witnesses.append(Witness({"direction": "forward", "view": name, **w.location}, w.test, w.lhs, w.rhs))
    if backward == "VIOLATED":
        w = sep.first
        witnesses.append(Witness({"direction": "backward", **w.location}, w.test, w.lhs, w.rhs))
    return CheckReport(
        "marginal_characterisation", witnesses, checked_count=len(views) + 1,
        details={"sep_exchangeable": sep.passed,
                 "views": {k: {"reverse_martingale": ok(a), "stationary": ok(b)}
                           for k, (a, b) in views.items()},
                 "forward": forward, "backward": backward},
        subreports={"sep_exchangeable": sep})


# ---------------------------------------------------------------------------
# Search over small matrix laws


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def _point_masses(alphabet: tuple, rows: int, cols: int) -> list[tuple]:
    probe = MatrixLaw.point_mass(alphabet, [[alphabet[0]] * cols] * rows)
    return list(probe.space())


@dataclass(frozen=True)
class GridSpace:
    """Every convex combination of point masses with weights c/D, D <= denominator.

    Each law is listed once (at its least denominator), in a fixed order.
    """

    rows: int = 2
    cols: int = 2
    alphabet: tuple = (0, 1)
    denominator: int = 4

    def candidates(self) -> Iterator[MatrixLaw]:
        points = _point_masses(self.alphabet, self.rows, self.cols)
        for D in range(1, self.denominator + 1):
            for c in _compositions(D, len(points)):
                if math.gcd(D, *c) != 1:
                    continue
                yield MatrixLaw(self.alphabet, self.rows, self.cols,
                                {points[i]: Fraction(ci, D) for i, ci in enumerate(c) if ci})


@dataclass(frozen=True)
class RandomGridSpace:
    """``count`` seeded random grid laws: ``denominator`` draws of point masses."""

    rows: int = 2
    cols: int = 2
    alphabet: tuple = (0, 1)
    denominator: int = 6
    count: int = 1000
    seed: int = 0

    def candidates(self) -> Iterator[MatrixLaw]:
        import random

        rng = random.Random(self.seed)
        points = _point_masses(self.alphabet, self.rows, self.cols)
        for _ in range(self.count):
            probs: dict = {}
            for x in rng.choices(points, k=self.denominator):
                probs[x] = probs.get(x, Fraction(0)) + Fraction(1, self.denominator)
            yield MatrixLaw(self.alphabet, self.rows, self.cols, probs)


@dataclass(frozen=True)
class ExplicitSpace:
    laws: tuple

    def candidates(self) -> Iterator[MatrixLaw]:
        return iter(self.laws)


def _evaluate(args):
    law, variant = args
    mart = check_reverse_martingale_2d(law, variant)
    sep = check_sep_exchangeable(law)
    return mart.passed, sep.passed, mart.first


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("EXCHANGEABLE_WORKERS", "1")))
    except ValueError:
        return 1


def conjecture_search(space, budget: int | None = None, field_variant: str = "block-complement",
                      progress: Callable[[str], None] | None = None,
                      workers: int | None = None) -> CheckReport:
    """Run the 2-D reverse-martingale and separate-exchangeability checks over ``space``.

    The report fails only if a separately exchangeable law fails the
    martingale check.  Laws passing the martingale check but not separately
    exchangeable are counted as converse failures and the first one is
    serialized; these are findings about the finite grid and settle nothing
    about infinite matrices.
    """
    from .lawio import law_to_doc

    workers = default_workers() if workers is None else workers
    cands = space.candidates()
    if budget is not None:
        cands = itertools.islice(cands, budget)
    laws = list(cands)
    jobs = [(law, field_variant) for law in laws]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=64))
    else:
        results = []
        for i, job in enumerate(jobs, start=1):
            results.append(_evaluate(job))
            if progress and i % 1000 == 0:
                progress("%d candidates checked" % i)
    if progress and workers > 1:
        for i in range(1000, len(results) + 1, 1000):
            progress("%d candidates checked" % i)

    mart_pass = sep_pass = 0
    witnesses = []
    converse_idx = []
    forward_idx = []
    for idx, (mp, sp, first) in enumerate(results):
        mart_pass += mp
        sep_pass += sp
        if sp and not mp:
            forward_idx.append(idx)
            witnesses.append(Witness({"candidate": idx, **first.location}, first.test, first.lhs, first.rhs))
        if mp and not sp:
            converse_idx.append(idx)
    if not laws:
        status = "empty space or zero budget"
    elif converse_idx:
        status = "finite-grid converse counterexample found"
    else:
        status = "no counterexample in budget"
    details = {
        "candidates": len(laws), "field_variant": field_variant,
        "martingale_pass": mart_pass, "sep_exchangeable_pass": sep_pass,
        "forward_violations": len(forward_idx), "converse_failures": len(converse_idx),
        "status": status,
    }
    if converse_idx:
        details["first_converse_failure"] = {"candidate": converse_idx[0],
                                             "law": law_to_doc(laws[converse_idx[0]])}
    if forward_idx:
        details["first_forward_violation"] = {"candidate": forward_idx[0],
                                            "law": law_to_doc(laws[forward_idx[0]])}
    return CheckReport("conjecture_search", witnesses, checked_count=len(laws), details=details)

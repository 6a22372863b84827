"""Exact checkers for sequence laws.

Every checker returns a :class:`~exchangeable.report.CheckReport` whose
witnesses are listed in lexicographic order of (index, block, test), so the
first witness is the least violation.  Identities are checked on
positive-probability blocks only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (Conjunction, CountsTotal, DomainError, EmpiricalAt, JointLaw, PrefixCoords,
                   TailFrom, apply_perm, field_from, marginal, swap)
from .empirical import (Measure, TestFunction, count_measure_factorial, indicator, indicators)
from .families import urn_law
from .report import CheckReport, Witness, outcome_doc


class PreconditionError(DomainError):
    """A checker was invoked on a law outside its precondition."""


@dataclass(frozen=True)
class MartingaleCheckConfig:
    """Test functions (default: singleton indicators) and indices ``k`` to check."""

    test_functions: tuple | None = None
    ks: tuple | None = None

    def functions(self, alphabet) -> list[TestFunction]:
        return list(self.test_functions) if self.test_functions else indicators(alphabet)


def _cond_prob(law: JointLaw, block: Sequence, event) -> tuple[Fraction, Fraction]:
    mass = Fraction(0)
    hit = Fraction(0)
    for x in block:
        p = law.prob(x)
        mass += p
        if event(x):
            hit += p
    return mass, hit


# ---------------------------------------------------------------------------
# Exchangeability and stationarity


def check_exchangeable(law: JointLaw, brute_force: bool = False) -> CheckReport:
    """Invariance under coordinate permutations.

    The default checks the adjacent transpositions, which generate the
    symmetric group; ``brute_force`` compares against all ``n!`` permutations.
    """
    n = law.length
    if brute_force:
        perms = [p for p in itertools.permutations(range(n)) if p != tuple(range(n))]
    else:
        perms = [swap(n, i, i + 1) for i in range(n - 1)]
    witnesses = []
    checked = 0
    for perm in perms:
        name = "perm%s" % (list(perm),)
        for x in law.support():
            checked += 1
            # The permuted law gives x the mass the original gives its preimage.
            pre = [None] * n
            for i, j in enumerate(perm):
                pre[j] = x[i]
            q = law.prob(tuple(pre))
            p = law.prob(x)
            if p != q:
                witnesses.append(Witness({"outcome": outcome_doc(x)}, name, p, q))
    return CheckReport("exchangeable", witnesses, checked,
                       details={"mode": "brute-force" if brute_force else "adjacent",
                                "permutations": len(perms)})


def check_stationary(law: JointLaw) -> CheckReport:
    """Shift invariance of every window marginal."""
    n = law.length
    if n < 2:
        raise PreconditionError("stationarity needs length >= 2")
    witnesses = []
    checked = 0
    for w in range(1, n):
        base = marginal(law, range(w))
        for s in range(1, n - w + 1):
            shifted = marginal(law, range(s, s + w))
            keys = sorted(set(base.probs) | set(shifted.probs), key=law.sort_key)
            for y in keys:
                checked += 1
                if base.prob(y) != shifted.prob(y):
                    witnesses.append(Witness(
                        {"window": w, "shift": s, "outcome": outcome_doc(y)},
                        "P", shifted.prob(y), base.prob(y)))
    return CheckReport("stationary", witnesses, checked)


# ---------------------------------------------------------------------------
# Reverse measure-valued martingale


def reverse_martingale_field(law: JointLaw, k: int, support_only: bool = True):
    """The field generated by eta_k and the tail (xi_{k+1}, ..., xi_n)."""
    return field_from(law, Conjunction(EmpiricalAt(k), TailFrom(k)), support_only=support_only)


def check_reverse_martingale(law: JointLaw, cfg: MartingaleCheckConfig | None = None) -> CheckReport:
    """E(eta_{k-1} f | T_k) = eta_k f for k = 2..n, with T_k = sigma(eta_k, tail after k).

    Also checks the one-point form E(f(xi_k) | T_k) = eta_k f, reported with
    test ids prefixed ``point:``.
    """
    cfg = cfg or MartingaleCheckConfig()
    n = law.length
    if n < 2:
        raise PreconditionError("reverse-martingale check needs length >= 2")
    fs = cfg.functions(law.alphabet)
    ks = cfg.ks or tuple(range(2, n + 1))
    witnesses = []
    checked = 0
    for k in ks:
        if not 2 <= k <= n:
            raise DomainError("k=%d out of range 2..%d" % (k, n))
        fld = reverse_martingale_field(law, k)
        for block in fld.blocks:
            rep = block[0]
            mass = sum((law.prob(x) for x in block), Fraction(0))
            for f in fs:
                fv = f.as_dict()
                eta_k = sum((fv[a] for a in rep[:k]), Fraction(0)) / k
                prev = Fraction(0)
                point = Fraction(0)
                for x in block:
                    p = law.prob(x)
                    prev += p * sum((fv[a] for a in x[:k - 1]), Fraction(0))
                    point += p * fv[x[k - 1]]
                prev /= mass * (k - 1)
                point /= mass
                checked += 2
                loc = {"k": k, "block": outcome_doc(rep)}
                if prev != eta_k:
                    witnesses.append(Witness(loc, f.name, prev, eta_k))
                if point != eta_k:
                    witnesses.append(Witness(loc, "point:" + f.name, point, eta_k))
    return CheckReport("reverse_martingale", witnesses, checked)


def verify_converse(law: JointLaw) -> CheckReport:
    """Instance of: stationary and reverse martingale imply exchangeable.

    The verdict fails only on an implication violation, which is flagged as
    ``CONTRADICTION`` in the details.
    """
    stationary = check_stationary(law)
    martingale = check_reverse_martingale(law)
    exchangeable = check_exchangeable(law)
    premises = stationary.passed and martingale.passed
    if not premises:
        status = "vacuous"
    elif exchangeable.passed:
        status = "holds"
    else:
        status = "CONTRADICTION"
    witnesses = exchangeable.witnesses[:1] if status == "CONTRADICTION" else []
    return CheckReport(
        "converse", witnesses, checked_count=3,
        details={"stationary": stationary.passed, "reverse_martingale": martingale.passed,
                 "exchangeable": exchangeable.passed, "implication": status},
        subreports={"stationary": stationary, "reverse_martingale": martingale,
                    "exchangeable": exchangeable})


# ---------------------------------------------------------------------------
# Markov property and homogeneity


def _transition(law: JointLaw, k: int) -> dict:
    """P(xi_{k+1} = b | xi_k = a) as {a: {b: p}} for positive-probability a (1-based k)."""
    pair = marginal(law, (k - 1, k))
    single = marginal(law, (k - 1,))
    out: dict = {}
    for (a,), pa in single.probs.items():
        out[a] = {b: pair.prob((a, b)) / pa for b in law.alphabet}
    return out


def check_markov(law: JointLaw) -> CheckReport:
    """The next coordinate depends on the past only through the present.

    ``details["repeat_conditionals"]`` lists, per symbol ``a``, the values
    P(xi_{k+1} = a | xi_1 = ... = xi_k = a) for k = 1..n-1.  For a homogeneous
    chain they do not depend on ``k``.
    """
    n = law.length
    if n < 3:
        raise PreconditionError("Markov check needs length >= 3")
    witnesses = []
    checked = 0
    for k in range(2, n):
        prefixes = marginal(law, range(k))
        extended = marginal(law, range(k + 1))
        trans = _transition(law, k)
        for u, pu in prefixes.probs.items():
            for b in law.alphabet:
                checked += 1
                lhs = extended.prob(u + (b,)) / pu
                rhs = trans[u[-1]][b]
                if lhs != rhs:
                    witnesses.append(Witness({"k": k, "prefix": outcome_doc(u)},
                                             "next=%s" % (b,), lhs, rhs))
    repeats = {}
    for a in law.alphabet:
        vals = []
        for k in range(1, n):
            pk = marginal(law, range(k)).prob((a,) * k)
            if not pk:
                break
            vals.append(marginal(law, range(k + 1)).prob((a,) * (k + 1)) / pk)
        if vals:
            repeats[a] = vals
    return CheckReport("markov", witnesses, checked, details={"repeat_conditionals": repeats})


def check_homogeneous(law: JointLaw) -> CheckReport:
    """One-step transition probabilities agree across time on positive states."""
    if not check_markov(law).passed:
        raise PreconditionError("homogeneity is only defined for Markov laws")
    witnesses = []
    checked = 0
    reference: dict = {}
    for k in range(1, law.length):
        for a, row in _transition(law, k).items():
            if a not in reference:
                reference[a] = (k, row)
                continue
            k0, row0 = reference[a]
            for b in law.alphabet:
                checked += 1
                if row[b] != row0[b]:
                    witnesses.append(Witness({"k": k, "reference_k": k0, "state": str(a)},
                                             "next=%s" % (b,), row[b], row0[b]))
    return CheckReport("homogeneous", witnesses, checked)


# ---------------------------------------------------------------------------
# Urn conditions


def _urn_blocks(law: JointLaw, k: int):
    fld = field_from(law, Conjunction(PrefixCoords(k), CountsTotal(law.length)), support_only=True)
    for block in fld.blocks:
        rep = block[0]
        beta_n = Measure.counts_of(law.alphabet, rep)
        beta_k = Measure.counts_of(law.alphabet, rep[:k])
        yield block, rep, beta_n - beta_k


def check_marginal_urn(law: JointLaw) -> CheckReport:
    """P(xi_{k+1} = . | beta_n, xi_1..xi_k) = (beta_n - beta_k) / (n - k) for k < n."""
    n = law.length
    witnesses = []
    checked = 0
    for k in range(n):
        for block, rep, remaining in _urn_blocks(law, k):
            for b in law.alphabet:
                checked += 1
                mass, hit = _cond_prob(law, block, lambda x: x[k] == b)
                lhs = hit / mass
                rhs = remaining[b] / (n - k)
                if lhs != rhs:
                    witnesses.append(Witness({"k": k, "block": outcome_doc(rep)},
                                             "next=%s" % (b,), lhs, rhs))
    return CheckReport("marginal_urn", witnesses, checked)


def check_joint_urn(law: JointLaw, ks: Sequence[int] | None = None) -> CheckReport:
    """The whole tail given (beta_n, prefix) is the normalized factorial measure of the rest."""
    n = law.length
    witnesses = []
    checked = 0
    for k in (range(n) if ks is None else ks):
        for block, rep, remaining in _urn_blocks(law, k):
            target = count_measure_factorial(remaining, n - k).normalized()
            mass = sum((law.prob(x) for x in block), Fraction(0))
            observed = {x[k:]: law.prob(x) / mass for x in block}
            tails = sorted(set(target) | set(observed), key=lambda t: law.sort_key(t))
            for t in tails:
                checked += 1
                lhs, rhs = observed.get(t, Fraction(0)), target.get(t, Fraction(0))
                if lhs != rhs:
                    witnesses.append(Witness({"k": k, "block": outcome_doc(rep),
                                              "tail": outcome_doc(t)}, "P(tail)", lhs, rhs))
    return CheckReport("joint_urn", witnesses, checked)


# ---------------------------------------------------------------------------
# Stepwise urn product versus the factorial-measure form


def demonstrate_flaw() -> CheckReport:
    """Shows the stepwise product chain differs from the factorial-measure form.

    Two-ball urn ``{a, b}``, ``n = 2``, ``k = 0`` and ``f_1 = f_2 = 1{a}``.
    The witnesses compare, path by path, the product
    prod_j (beta_2 - beta_{j-1}) f_j / (2 - j + 1) with
    (beta_2^{(2)} / 2!)(f_1 x f_2).  The details record the true conditional
    expectation given beta_2, whether the product is beta_2-measurable, and
    that each single conditioning step given the full prefix is valid.
    """
    alphabet = ("a", "b")
    n = 2
    law = urn_law(Measure(alphabet, {"a": 1, "b": 1}), n)
    f = indicator(alphabet, "a")
    fs = [f, f]
    beta_field = field_from(law, CountsTotal(n), support_only=True)

    product = {}
    factorial_form = {}
    for x in law.support():
        beta_n = Measure.counts_of(alphabet, x)
        value = Fraction(1)
        for j in range(1, n + 1):
            beta_prev = Measure.counts_of(alphabet, x[:j - 1])
            remaining = beta_n - beta_prev
            value *= sum((remaining[a] * fs[j - 1](a) for a in alphabet), Fraction(0)) / (n - j + 1)
        product[x] = value
        factorial_form[x] = count_measure_factorial(beta_n, n).integrate(fs) / math.factorial(n)

    true_ce = {}
    for block in beta_field.blocks:
        mass = sum((law.prob(x) for x in block), Fraction(0))
        value = sum((law.prob(x) * f(x[0]) * f(x[1]) for x in block), Fraction(0)) / mass
        for x in block:
            true_ce[x] = value

    # Single steps E(f_j(xi_j) | xi_1..xi_{j-1}, beta_n) = (beta_n - beta_{j-1}) f_j / (n-j+1).
    steps_hold = check_marginal_urn(law).passed

    witnesses = [Witness({"path": outcome_doc(x)}, "product-vs-factorial", product[x], factorial_form[x])
                 for x in law.support() if product[x] != factorial_form[x]]
    return CheckReport(
        "stepwise_product_gap", witnesses, checked_count=len(product),
        details={
            "k": 0, "n": n,
            "product_chain": {"".join(x): v for x, v in product.items()},
            "factorial_form": {"".join(x): v for x, v in factorial_form.items()},
            "true_conditional_expectation": {"".join(x): v for x, v in true_ce.items()},
            "product_is_beta_measurable": beta_field.is_measurable(product),
            "single_steps_hold": steps_hold,
        })

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exchangeable import (Conjunction, Measure, CountsTotal, DomainError, EmpiricalAt, JointLaw,
                          PrefixCoords, RandomVariable, SingleCoord, TailFrom, cond_expectation,
                          equal_in_distribution, field_from, iid_law, marginal, permute, swap)
from exchangeable.core import compose
from exchangeable.families import counterexample_law

from conftest import AB, laws


def biased():
    return Measure(AB, {"a": Fraction(1, 3), "b": Fraction(2, 3)})


def test_law_validation():
    with pytest.raises(DomainError):
        JointLaw(AB, 1, {("a",): Fraction(1, 2)})
    with pytest.raises(DomainError):
        JointLaw(AB, 1, {("c",): 1})
    with pytest.raises(DomainError):
        JointLaw(("a", "a"), 1, {("a",): 1})
    with pytest.raises(TypeError):
        JointLaw(AB, 1, {("a",): 1.0})
    law = JointLaw(AB, 1, {("b",): 1, ("a",): 0})
    assert law.support() == [("b",)]


def test_permute_identity_and_involution():
    law = counterexample_law(3)
    assert permute(law, (0, 1, 2)) == law
    s = swap(3, 0, 1)
    assert permute(permute(law, s), s) == law


def test_swap_on_iid_law_by_enumeration():
    law = iid_law(biased(), 2)
    swapped = {(x[1], x[0]): p for x, p in law.probs.items()}
    assert permute(law, (1, 0)).probs == swapped == law.probs


def test_permute_rejects_bad_perm():
    with pytest.raises(DomainError):
        permute(counterexample_law(2), (0, 0))


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_permute_is_group_action(data):
    law = data.draw(laws(max_n=4))
    n = law.length
    p = data.draw(st.permutations(range(n)).map(tuple))
    q = data.draw(st.permutations(range(n)).map(tuple))
    assert permute(permute(law, p), q) == permute(law, compose(p, q))


def test_marginal():
    law = counterexample_law(3)
    assert marginal(law, (0, 1, 2)) == law
    # Oracle: alpha=-1 -> 1, alpha=0 -> 0, alpha=1 -> fair coin on {1, 2}.
    third, half = Fraction(1, 3), Fraction(1, 2)
    expected = {(0,): third, (1,): third + third * half, (2,): third * half}
    assert marginal(law, (0,)).probs == expected
    assert marginal(law, (0,)) == marginal(law, (1,))
    with pytest.raises(DomainError):
        marginal(law, ())
    with pytest.raises(DomainError):
        marginal(law, (1, 0))


def test_field_extremes():
    law = iid_law(biased(), 3)
    trivial = field_from(law, TailFrom(3))
    assert len(trivial.blocks) == 1 and len(trivial.blocks[0]) == 8
    singletons = field_from(law, PrefixCoords(3))
    assert all(len(b) == 1 for b in singletons.blocks) and len(singletons.blocks) == 8


def test_field_conjunction_matches_grouping_oracle():
    law = iid_law(biased(), 3)
    fld = field_from(law, Conjunction(EmpiricalAt(2), TailFrom(2)))
    oracle = {}
    for x in itertools.product(AB, repeat=3):
        oracle.setdefault((tuple(sorted(x[:2])), x[2]), set()).add(x)
    assert {frozenset(b) for b in fld.blocks} == {frozenset(v) for v in oracle.values()}
    assert len(fld.blocks) == 6


def test_field_index_validation():
    law = iid_law(biased(), 2)
    for spec in (EmpiricalAt(3), TailFrom(3), SingleCoord(0), CountsTotal(5)):
        with pytest.raises(DomainError):
            field_from(law, spec)


@settings(max_examples=60, deadline=None)
@given(law=laws(min_n=2, max_n=3))
def test_conjunction_refines_components(law):
    a, b = EmpiricalAt(law.length), SingleCoord(1)
    fine = field_from(law, Conjunction(a, b))
    assert fine.refines(field_from(law, a)) and fine.refines(field_from(law, b))


def test_cond_expectation_extremes():
    law = counterexample_law(2)
    rv = RandomVariable.of(law, lambda x: x[0] + 2 * x[1])
    assert {x: v for x, v in cond_expectation(law, rv, field_from(law, PrefixCoords(2))).items()
            if x in law.probs} == rv
    const = cond_expectation(law, rv, field_from(law, TailFrom(2)))
    assert set(const.values()) == {law.expectation(rv)}


def test_cond_expectation_zero_block_is_zero():
    law = JointLaw(AB, 2, {("a", "a"): 1})
    rv = RandomVariable.of(law, lambda x: 5)
    ce = cond_expectation(law, rv, field_from(law, SingleCoord(1)))
    assert ce[("b", "b")] == 0 and ce[("a", "b")] == 5


@settings(max_examples=40, deadline=None)
@given(law=laws(min_n=3, max_n=3, max_weight=5), data=st.data())
def test_tower_mean_and_idempotence(law, data):
    values = data.draw(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
    rv = RandomVariable(zip(itertools.product(AB, repeat=3), map(Fraction, values)))
    fine = field_from(law, PrefixCoords(2))
    coarse = field_from(law, SingleCoord(1))
    inner = cond_expectation(law, rv, fine)
    lhs = cond_expectation(law, inner, coarse)
    rhs = cond_expectation(law, rv, coarse)
    assert all(lhs[x] == rhs[x] for x in law.support())
    assert law.expectation(inner) == law.expectation(rv)
    assert cond_expectation(law, inner, fine) == inner


def test_equal_in_distribution():
    coin = iid_law(Measure.uniform(AB), 2)
    assert equal_in_distribution(coin, coin).passed
    r = equal_in_distribution(coin, JointLaw.point_mass(AB, ("a", "a")))
    assert not r.passed
    assert (r.first.location["outcome"], r.first.lhs, r.first.rhs) == (["a", "a"], Fraction(1, 4), 1)
    law = counterexample_law(3)
    assert equal_in_distribution(law, permute(law, swap(3, 0, 1))).passed
    with pytest.raises(DomainError):
        equal_in_distribution(coin, law)


@settings(max_examples=40, deadline=None)
@given(law=laws(max_n=3))
def test_masses_stay_normalized(law):
    assert sum(law.probs.values()) == 1
    for perm in itertools.permutations(range(law.length)):
        assert sum(permute(law, perm).probs.values()) == 1
    assert sum(marginal(law, (0,)).probs.values()) == 1

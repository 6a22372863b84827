import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from exchangeable import (DomainError, MatrixLaw, Measure, check_marginal_characterisation,
                          check_reverse_martingale_2d, check_sep_exchangeable,
                          conjecture_search, empirical_2d, marginal_views, permute_matrix)
from exchangeable.lawio import law_from_doc
from exchangeable.matrix import (ExplicitSpace, GridSpace, RandomGridSpace, field_refinement,
                                 iid_matrix_law, label_matrix_law, matrix_mixture)

from conftest import matrix_laws

HALF = Fraction(1, 2)
BIN = (0, 1)


def xor_labels(rows, cols):
    return label_matrix_law({0: HALF, 1: HALF}, {0: HALF, 1: HALF}, lambda a, b: a ^ b, BIN, rows, cols)


def noisy_labels(rows, cols):
    third = Fraction(1, 3)
    return label_matrix_law({0: third, 1: 2 * third}, {0: HALF, 1: HALF},
                            lambda a, b: {0: Fraction(1 + a + b, 4), 1: Fraction(3 - a - b, 4)},
                            BIN, rows, cols)


def test_permute_matrix_semantics():
    law = MatrixLaw.point_mass(BIN, [[0, 1, 1], [0, 0, 1]])
    moved = permute_matrix(law, (1, 0), (2, 0, 1))
    assert moved.support() == [((1, 0, 0), (1, 0, 1))]
    # Composition: applying p then q equals a single reindexing.
    twice = permute_matrix(permute_matrix(law, (1, 0), (1, 2, 0)), (1, 0), (1, 2, 0))
    assert twice.support() == [tuple(tuple(law.support()[0][i][j] for j in (2, 0, 1)) for i in (0, 1))]
    with pytest.raises(DomainError):
        permute_matrix(law, (0, 0), (0, 1, 2))


@pytest.mark.parametrize("law", [iid_matrix_law(Measure(BIN, {0: Fraction(1, 3), 1: Fraction(2, 3)}), 2, 3),
                                 xor_labels(3, 2), noisy_labels(2, 2)], ids=["iid", "xor", "noisy"])
def test_sep_exchangeable_fixtures(law):
    assert check_sep_exchangeable(law).passed
    assert check_sep_exchangeable(law, brute_force=True).passed


def sep_oracle(law):
    return all(permute_matrix(law, rp, cp) == law
               for rp in itertools.permutations(range(law.rows))
               for cp in itertools.permutations(range(law.cols)))


@settings(max_examples=120, deadline=None)
@given(law=matrix_laws())
def test_sep_exchangeable_adjacent_brute_and_oracle_agree(law):
    a = check_sep_exchangeable(law).passed
    assert a == check_sep_exchangeable(law, brute_force=True).passed == sep_oracle(law)


def test_sep_exchangeable_failures():
    law = MatrixLaw.point_mass(BIN, [[0, 1], [1, 1]])
    r = check_sep_exchangeable(law)
    assert not r.passed and r.first.lhs == 1 and r.first.rhs == 0
    # Row-exchangeable but not column-exchangeable.
    rows_only = matrix_mixture([(HALF, MatrixLaw.point_mass(BIN, [[0, 1], [0, 1]])),
                                (HALF, MatrixLaw.point_mass(BIN, [[0, 1], [1, 0]]))])
    rows_only = matrix_mixture([(HALF, rows_only), (HALF, permute_matrix(rows_only, (1, 0), (0, 1)))])
    assert not check_sep_exchangeable(rows_only).passed
    assert permute_matrix(rows_only, (1, 0), (0, 1)) == rows_only


def martingale_2d_oracle(law, variant):
    """Direct conditional expectations with fields keyed by explicit statistics."""
    N, M = law.rows, law.cols

    def key(x, n, m):
        quad = tuple(tuple(sorted(d.items())) for u in range(n, N + 1) for v in range(m, M + 1)
                     for d in [empirical_2d(x, u, v, law.alphabet).masses])
        if variant == "quadrant":
            return quad
        outside = tuple(x[i][j] for i in range(N) for j in range(M) if i >= n or j >= m)
        return quad, outside

    for n, m in itertools.product(range(2, N + 1), range(2, M + 1)):
        groups = {}
        for x in law.support():
            groups.setdefault(key(x, n, m), []).append(x)
        for block in groups.values():
            mass = sum(law.prob(x) for x in block)
            for a in law.alphabet:
                target = empirical_2d(block[0], n, m, law.alphabet)[a]
                for k, l in itertools.product(range(1, n + 1), range(1, m + 1)):
                    lhs = sum(law.prob(x) * empirical_2d(x, k, l, law.alphabet)[a] for x in block) / mass
                    if lhs != target:
                        return False
    return True


@pytest.mark.parametrize("variant", ["block-complement", "quadrant"])
def test_2d_martingale_small_fixtures(variant):
    for law in (iid_matrix_law(Measure.uniform(BIN), 2, 2), xor_labels(2, 2), noisy_labels(2, 2),
                iid_matrix_law(Measure.uniform(BIN), 2, 3)):
        r = check_reverse_martingale_2d(law, variant)
        assert r.passed, r.first
        assert martingale_2d_oracle(law, variant)


def test_xor_labels_3x3_depends_on_field_variant():
    law = xor_labels(3, 3)
    assert check_reverse_martingale_2d(law, "quadrant").passed
    r = check_reverse_martingale_2d(law, "block-complement")
    assert not r.passed
    assert martingale_2d_oracle(law, "quadrant") and not martingale_2d_oracle(law, "block-complement")
    refinement = field_refinement(law)["2,2"]
    assert refinement["refines"] and not refinement["equal"]
    assert refinement["blocks"][0] > refinement["blocks"][1]


def test_point_mass_fails_2d_martingale():
    r = check_reverse_martingale_2d(MatrixLaw.point_mass(BIN, [[0, 1], [1, 1]]))
    assert not r.passed
    w = r.first
    assert (w.location["n"], w.location["m"]) == (2, 2)
    assert w.lhs != w.rhs


@settings(max_examples=60, deadline=None)
@given(law=matrix_laws(max_rows=2, max_cols=2))
def test_2d_martingale_agrees_with_oracle(law):
    if law.rows < 2 or law.cols < 2:
        return
    for variant in ("block-complement", "quadrant"):
        assert check_reverse_martingale_2d(law, variant).passed == martingale_2d_oracle(law, variant)


def test_2d_martingale_domain():
    with pytest.raises(DomainError):
        check_reverse_martingale_2d(iid_matrix_law(Measure.uniform(BIN), 1, 3))
    with pytest.raises(DomainError):
        check_reverse_martingale_2d(xor_labels(2, 2), "nonsense")


def test_field_refinement_2x2_equal():
    for key, info in field_refinement(xor_labels(2, 2)).items():
        assert info["refines"]


def test_marginal_views():
    law = MatrixLaw.point_mass(BIN, [[0, 1, 1], [1, 0, 1]])
    cols = marginal_views(law, n=2)
    assert cols.length == 3 and cols.support() == [((0, 1), (1, 0), (1, 1))]
    rows = marginal_views(law, m=1)
    assert rows.length == 2 and rows.support() == [((0,), (1,))]
    with pytest.raises(DomainError):
        marginal_views(law)
    with pytest.raises(DomainError):
        marginal_views(law, n=3)


def test_marginal_characterisation():
    r = check_marginal_characterisation(noisy_labels(2, 2))
    assert r.passed and r.details["forward"] == "holds" and r.details["backward"] == "holds"
    r = check_marginal_characterisation(MatrixLaw.point_mass(BIN, [[0, 1], [1, 1]]))
    assert r.passed and r.details["forward"] == "vacuous" and r.details["backward"] == "vacuous"


@settings(max_examples=60, deadline=None)
@given(law=matrix_laws())
def test_marginal_characterisation_never_violated(law):
    r = check_marginal_characterisation(law)
    assert r.passed, r.details


def test_grid_space_counts():
    assert sum(1 for _ in GridSpace(denominator=1).candidates()) == 16
    laws = list(GridSpace(denominator=2).candidates())
    assert len(laws) == 16 + 120
    assert len({tuple(sorted(l.probs.items())) for l in laws}) == len(laws)


def test_search_small_grid_and_budget():
    r = conjecture_search(GridSpace(denominator=2))
    assert r.passed
    assert r.details["candidates"] == 136
    assert r.details["forward_violations"] == 0
    assert r.details["status"] in ("no counterexample in budget", "finite-grid converse counterexample found")
    empty = conjecture_search(GridSpace(), budget=0)
    assert empty.passed and empty.details["status"] == "empty space or zero budget"


def test_search_explicit_space_finds_variant_gap():
    r = conjecture_search(ExplicitSpace((xor_labels(2, 2), xor_labels(3, 3))))
    assert not r.passed and r.details["forward_violations"] == 1
    assert law_from_doc(r.details["first_forward_violation"]["law"]).rows == 3
    q = conjecture_search(ExplicitSpace((xor_labels(2, 2), xor_labels(3, 3))), field_variant="quadrant")
    assert q.passed


def test_search_random_space_reproducible_and_parallel():
    space = RandomGridSpace(count=200, seed=3)
    a = conjecture_search(space).to_doc()
    b = conjecture_search(space, workers=2).to_doc()
    assert a == b
    lines = []
    conjecture_search(RandomGridSpace(count=2000, seed=1), progress=lines.append)
    assert lines == ["1000 candidates checked", "2000 candidates checked"]

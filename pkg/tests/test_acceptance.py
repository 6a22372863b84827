"""One test per acceptance criterion, at its stated tolerance and time budget."""

import contextlib
import itertools
import random
import time
from fractions import Fraction

import pytest

from exchangeable import (JointLaw, MatrixLaw, Measure, check_exchangeable, check_homogeneous,
                          check_joint_urn, check_marginal_characterisation, check_marginal_urn,
                          check_markov, check_reverse_martingale, check_reverse_martingale_2d,
                          check_sep_exchangeable, check_stationary, conjecture_search,
                          counterexample_law, demonstrate_flaw, iid_law, markov_law, markov_spec,
                          mixture_law, polya_law, urn_law)
from exchangeable.families import stationary_distribution
from exchangeable.matrix import GridSpace, iid_matrix_law, label_matrix_law, matrix_mixture
from exchangeable.montecarlo import (CounterexampleSource, all_equal, estimate_conditional,
                                     estimate_probability, make_rng)

from conftest import AB, ABC, CRITERIA

HALF, THIRD = Fraction(1, 2), Fraction(1, 3)
BIN = (0, 1)


@contextlib.contextmanager
def criterion(number, budget_s):
    start = time.perf_counter()
    notes = []
    try:
        yield notes
    except BaseException as exc:
        reason = notes or [str(exc).splitlines()[0] if str(exc) else type(exc).__name__]
        CRITERIA[number] = (False, "; ".join(reason))
        raise
    elapsed = time.perf_counter() - start
    CRITERIA[number] = (elapsed < budget_s, "; ".join(notes + ["%.2fs" % elapsed]))
    assert elapsed < budget_s, "took %.1fs, budget %ss" % (elapsed, budget_s)


def ones_conditional(law):
    """P(first = 1 | all later coordinates = 1), computed from the exact law."""
    rest = [x for x in law.support() if all(v == 1 for v in x[1:])]
    den = sum(law.prob(x) for x in rest)
    return sum(law.prob(x) for x in rest if x[0] == 1) / den


def test_criterion_1_counterexample_closed_forms():
    with criterion(1, 1.0) as notes:
        bad = []
        for n in range(1, 9):
            law = counterexample_law(n)
            if law.prob((1,) * n) != THIRD + THIRD * HALF ** n:
                bad.append("n=%d joint" % n)
            got, want = ones_conditional(law), Fraction(2 ** n + 1, 2 ** n + 2)
            if got != want:
                bad.append("n=%d conditional %s != %s" % (n, got, want))
        notes.extend(bad)
        assert not bad, bad


def exchangeable_fixtures():
    for n in range(1, 6):
        yield iid_law(Measure(ABC, {"a": HALF, "b": THIRD, "c": Fraction(1, 6)}), n)
        yield iid_law(Measure.uniform(AB), n)
        yield mixture_law([(THIRD, iid_law(Measure(AB, {"a": Fraction(1, 4), "b": Fraction(3, 4)}), n)),
                           (2 * THIRD, iid_law(Measure.uniform(AB), n))])
        yield mixture_law([(HALF, iid_law(Measure.delta(ABC, "c"), n)),
                           (HALF, iid_law(Measure(ABC, {"a": THIRD, "b": 2 * THIRD}), n))])
        yield urn_law(Measure(ABC, {"a": 2, "b": 2, "c": 1}), n)
        yield urn_law(Measure(AB, {"a": 3, "b": 2}), n)
        yield polya_law(Measure(AB, {"a": 1, "b": 2}), 1, n)
        yield polya_law(Measure(ABC, {"a": 1, "b": 1, "c": 1}), 2, n)
        yield counterexample_law(n)


def test_criterion_2_exchangeable_fixtures_are_reverse_martingales():
    with criterion(2, 10.0) as notes:
        count = point_checks = 0
        for law in exchangeable_fixtures():
            count += 1
            if law.length < 2:
                continue
            r = check_reverse_martingale(law)
            assert r.passed, (law.alphabet, law.length, r.first)
            point_checks += r.checked_count // 2
        notes.append("%d fixtures, %d point-form identities" % (count, point_checks))


def random_binary_laws(rng, count):
    for _ in range(count):
        n = rng.randint(2, 4)
        size = 2 ** n
        kind = rng.random()
        if kind < 0.6:
            # Arbitrary sparse grid law.
            w = [rng.choice((0, 0, 1, 2, 3)) for _ in range(size)]
            if not any(w):
                w[rng.randrange(size)] = 1
            probs = dict(zip(itertools.product(AB, repeat=n), w))
        elif kind < 0.8:
            # Exchangeable: weight depends only on the count of b.
            by_count = [rng.randint(0, 3) for _ in range(n + 1)]
            if not any(by_count):
                by_count[0] = 1
            probs = {x: by_count[x.count("b")] for x in itertools.product(AB, repeat=n)}
        else:
            # Stationary Markov chain on a quarter grid.
            p, q = (Fraction(rng.randint(0, 4), 4) for _ in range(2))
            kernel = {"a": {"a": p, "b": 1 - p}, "b": {"a": q, "b": 1 - q}}
            if p == 1 or q == 0:
                init = {"a": HALF, "b": HALF} if (p, q) == (1, 0) else (
                    {"a": 1} if p == 1 else {"b": 1})
            else:
                rows = {a: Measure(AB, kernel[a]) for a in AB}
                init = stationary_distribution(rows, AB).masses
            yield markov_law(markov_spec(AB, init, kernel), n)
            continue
        total = sum(probs.values())
        yield JointLaw(AB, n, {x: Fraction(v, total) for x, v in probs.items() if v})


def test_criterion_3_stationary_martingale_implies_exchangeable():
    with criterion(3, 120.0) as notes:
        rng = random.Random(20261014)
        tested = antecedent = violations = 0
        for law in random_binary_laws(rng, 10_000):
            tested += 1
            if check_stationary(law).passed and check_reverse_martingale(law).passed:
                antecedent += 1
                violations += not check_exchangeable(law).passed
        notes.append("%d laws, %d satisfy both hypotheses, %d violations" % (tested, antecedent, violations))
        assert tested >= 10_000 and antecedent > 0 and violations == 0


def markov_fixtures():
    for p, q in itertools.product([Fraction(i, 4) for i in range(5)], repeat=2):
        kernel = {"a": {"a": p, "b": 1 - p}, "b": {"a": q, "b": 1 - q}}
        for init in ({"a": HALF, "b": HALF}, {"a": Fraction(1, 4), "b": Fraction(3, 4)}, {"a": 1}):
            for n in (3, 4, 5):
                yield markov_law(markov_spec(AB, init, kernel), n)


def test_criterion_4_markov_pipeline():
    with criterion(4, 10.0) as notes:
        homogeneous = martingale = 0
        for law in markov_fixtures():
            if not check_homogeneous(law).passed:
                continue
            homogeneous += 1
            if check_reverse_martingale(law).passed:
                martingale += 1
                assert check_exchangeable(law).passed
        notes.append("%d homogeneous fixtures, %d pass the martingale check" % (homogeneous, martingale))
        for n in range(3, 8):
            r = check_markov(counterexample_law(n))
            assert not r.passed
            w = r.first
            # Witness compares P(next = 1 | k ones) with P(next = 1 | last one) at the smallest k.
            assert (w.lhs, w.rhs) == (Fraction(2 ** 3 + 1, 2 ** 3 + 2), Fraction(2 ** 2 + 1, 2 ** 2 + 2))
            seq = [Fraction(s) for s in r.details["repeat_conditionals"]["1"]]
            assert seq == [Fraction(2 ** k + 1, 2 ** k + 2) for k in range(2, n + 1)]


def test_criterion_5_urn_identities_and_stepwise_gap():
    with criterion(5, 5.0) as notes:
        urns = [Measure(AB, {"a": 1, "b": 1}), Measure(AB, {"a": 2, "b": 1}),
                Measure(ABC, {"a": 1, "b": 1, "c": 2}), Measure(ABC, {"a": 2, "b": 1, "c": 1})]
        count = 0
        for counts in urns:
            for n in range(1, min(4, int(counts.total)) + 1):
                law = urn_law(counts, n)
                assert check_marginal_urn(law).passed and check_joint_urn(law).passed
                count += 1
        r = demonstrate_flaw()
        assert not r.passed
        assert r.first.location == {"path": ["b", "a"]}
        assert (r.first.lhs, r.first.rhs) == (HALF, 0)
        notes.append("%d urn laws; gap 1/2 vs 0 on path (b, a)" % count)


def matrix_fixtures():
    fair = {0: HALF, 1: HALF}
    for size in (2, 3):
        yield "iid %dx%d" % (size, size), iid_matrix_law(Measure(BIN, {0: THIRD, 1: 2 * THIRD}), size, size)
        yield "xor-labels %dx%d" % (size, size), label_matrix_law(fair, fair, lambda a, b: a ^ b, BIN, size, size)
        yield "mixture %dx%d" % (size, size), matrix_mixture([
            (HALF, iid_matrix_law(Measure.uniform(BIN), size, size)),
            (HALF, iid_matrix_law(Measure(BIN, {0: Fraction(1, 4), 1: Fraction(3, 4)}), size, size))])


def test_criterion_6_matrix_results():
    with criterion(6, 60.0) as notes:
        failures = []
        for name, law in matrix_fixtures():
            assert check_sep_exchangeable(law).passed, name
            for variant in ("block-complement", "quadrant"):
                r = check_reverse_martingale_2d(law, variant)
                if not r.passed:
                    failures.append("%s under %s: %s lhs=%s rhs=%s"
                                    % (name, variant, r.first.location, r.first.lhs, r.first.rhs))
            c = check_marginal_characterisation(law)
            assert c.details["forward"] == "holds" and c.details["backward"] == "holds", name
        point = MatrixLaw.point_mass(BIN, [[0, 1], [1, 1]])
        sep = check_sep_exchangeable(point)
        mart = [check_reverse_martingale_2d(point, v) for v in ("block-complement", "quadrant")]
        views = check_marginal_characterisation(point)
        assert not sep.passed and all(not r.passed for r in mart)
        assert not all(v["reverse_martingale"] and v["stationary"] for v in views.details["views"].values())
        for r in [sep] + mart:
            assert r.first.lhs != r.first.rhs
        notes.extend(failures)
        assert not failures, failures


def test_criterion_7_exhaustive_grid_search():
    with criterion(7, 600.0) as notes:
        first = conjecture_search(GridSpace(rows=2, cols=2, alphabet=BIN, denominator=4))
        d = first.details
        notes.append("%d candidates, %d violations, status: %s" % (d["candidates"], d["forward_violations"], d["status"]))
        assert d["forward_violations"] == 0 and first.passed
        assert d["status"] in ("no counterexample in budget", "finite-grid converse counterexample found")
        assert conjecture_search(GridSpace(denominator=4)).to_doc() == first.to_doc()


def test_criterion_8_adjacent_equals_brute_force():
    with criterion(8, 60.0) as notes:
        rng = random.Random(8)
        seq_cases = mat_cases = 0
        for n in range(1, 6):
            outcomes = list(itertools.product(AB, repeat=n))
            for trial in range(40):
                probs = {x: rng.choice((0, 1, 2)) for x in outcomes}
                if trial % 2:
                    # Symmetrise over the full group half of the time.
                    probs = {x: sum(probs[y] for y in set(itertools.permutations(x))) for x in outcomes}
                if not any(probs.values()):
                    continue
                total = sum(probs.values())
                law = JointLaw(AB, n, {x: Fraction(v, total) for x, v in probs.items() if v})
                assert check_exchangeable(law).passed == check_exchangeable(law, brute_force=True).passed
                seq_cases += 1
        for N, M in itertools.product((1, 2, 3), repeat=2):
            space = list(MatrixLaw.point_mass(BIN, [[0] * M] * N).space())
            for trial in range(12):
                chosen = rng.sample(space, min(len(space), rng.randint(1, 6)))
                probs = {x: Fraction(1, len(chosen)) for x in chosen}
                if trial % 2:
                    orbit = {}
                    for x in chosen:
                        for rp in itertools.permutations(range(N)):
                            for cp in itertools.permutations(range(M)):
                                y = tuple(tuple(x[i][j] for j in cp) for i in rp)
                                orbit[y] = orbit.get(y, 0) + 1
                    total = sum(orbit.values())
                    probs = {y: Fraction(v, total) for y, v in orbit.items()}
                law = MatrixLaw(BIN, N, M, probs)
                assert check_sep_exchangeable(law).passed == check_sep_exchangeable(law, brute_force=True).passed
                mat_cases += 1
        notes.append("%d sequence laws, %d matrix laws" % (seq_cases, mat_cases))


def test_criterion_9_monte_carlo_cross_validation():
    with criterion(9, 60.0) as notes:
        count = 200_000
        for n, joint, cond in (
                (10, THIRD + THIRD * HALF ** 10, Fraction(2 ** 10 + 1, 2 ** 10 + 2)),
                (4, counterexample_law(4).prob((1,) * 4), ones_conditional(counterexample_law(4)))):
            src = CounterexampleSource(n)
            p = estimate_probability(src, all_equal(1), make_rng(9, n), count)
            c = estimate_conditional(src, all_equal(1, [0]), all_equal(1, slice(1, None)),
                                     make_rng(9, 100 + n), count)
            notes.append("n=%d joint %.5f+-%.5f, conditional %.5f+-%.5f" % (n, p.point, p.half_width,
                                                                            c.point, c.half_width))
            assert p.covers(joint), (n, p, joint)
            assert c.covers(cond), (n, c, cond)

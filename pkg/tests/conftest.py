import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from exchangeable import JointLaw, Measure
from exchangeable.core import MatrixLaw

AB = ("a", "b")
ABC = ("a", "b", "c")


def law_from_weights(alphabet, n, weights):
    outcomes = list(itertools.product(alphabet, repeat=n))
    total = sum(weights)
    return JointLaw(alphabet, n, {x: Fraction(w, total) for x, w in zip(outcomes, weights) if w})


@st.composite
def laws(draw, alphabet=AB, min_n=1, max_n=3, max_weight=4):
    n = draw(st.integers(min_n, max_n))
    size = len(alphabet) ** n
    weights = draw(st.lists(st.integers(0, max_weight), min_size=size, max_size=size)
                   .filter(lambda w: sum(w) > 0))
    return law_from_weights(alphabet, n, weights)


@st.composite
def matrix_laws(draw, max_rows=2, max_cols=3, max_weight=3):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    space = list(MatrixLaw.point_mass((0, 1), [[0] * cols] * rows).space())
    weights = draw(st.lists(st.integers(0, max_weight), min_size=len(space), max_size=len(space))
                   .filter(lambda w: sum(w) > 0))
    total = sum(weights)
    return MatrixLaw((0, 1), rows, cols, {x: Fraction(w, total) for x, w in zip(space, weights) if w})


def permutations_of(n):
    return st.permutations(list(range(n))).map(tuple)


@pytest.fixture
def fair_coin():
    return Measure.uniform(AB)


# Acceptance criteria record their verdict here; printed after the run.
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        ok, note = CRITERIA[key]
        terminalreporter.write_line("criterion %d: %s  %s" % (key, "PASS" if ok else "FAIL", note))

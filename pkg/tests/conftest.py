import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from stability_lab import CohClass, blowup_pn, wu_bundle


@pytest.fixture(scope="session")
def wu13():
    return wu_bundle(1, (1, 3))


@pytest.fixture(scope="session")
def bl3():
    return blowup_pn(3)


def positive_rationals(max_num=40, max_den=12):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_den))


def wu_kahler(rng: random.Random) -> CohClass:
    return CohClass((Fraction(rng.randint(1, 30), rng.randint(1, 8)), Fraction(rng.randint(1, 30), rng.randint(1, 8))))


def blowup_kahler(rng: random.Random) -> CohClass:
    a = Fraction(rng.randint(1, 30), rng.randint(1, 6))
    return CohClass((a, -a * Fraction(rng.randint(1, 99), 100)))


@st.composite
def wu_kahler_st(draw):
    return CohClass((draw(positive_rationals()), draw(positive_rationals())))


@st.composite
def blowup_kahler_st(draw):
    a = draw(positive_rationals())
    s = draw(st.integers(1, 99))
    return CohClass((a, -a * Fraction(s, 100)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

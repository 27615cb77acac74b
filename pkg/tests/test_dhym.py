import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stability_lab.cones import Verdict
from stability_lab.dhym import (
    SupercriticalError,
    central_charge,
    complementary_lifted_angle,
    cot,
    dhym_factor_classes,
    dhym_hypothesis_check,
    dhym_test,
    direct_coefficients,
    product_coefficients,
)
from stability_lab.geometry import blowup_pn, wu_bundle

from conftest import wu_kahler_st


def test_cot_snapping():
    assert cot(math.pi / 2) == 0
    assert cot(math.pi / 4) == 1
    assert cot(3 * math.pi / 4) == -1
    assert cot(math.pi / 3) == pytest.approx(1 / math.sqrt(3))
    with pytest.raises(ZeroDivisionError):
        cot(math.pi)


def test_central_charge(wu13):
    assert central_charge(wu13, (1, 1), (1, 1)) == (Fraction(-14), Fraction(14))
    assert central_charge(blowup_pn(2), (1, -Fraction(1, 2)), (1, -Fraction(1, 4))) == (Fraction(3, 16), Fraction(7, 4))


def test_lifted_angle(wu13):
    ang = complementary_lifted_angle(central_charge(wu13, (1, 1), (1, 1)), 3)
    assert ang.phi_hat == pytest.approx(3 * math.pi / 4)
    assert not ang.marginal
    with pytest.raises(SupercriticalError):
        complementary_lifted_angle((1, 0), 2)  # n pi/2 - 0 = pi, not in the open window
    with pytest.raises(ValueError):
        complementary_lifted_angle((0, 0), 3)


@given(st.floats(0.01, math.pi - 0.01))
def test_lifted_angle_window(theta):
    # Z = exp(i(n pi/2 - theta)) recovers theta
    n = 3
    z = complex(math.cos(n * math.pi / 2 - theta), math.sin(n * math.pi / 2 - theta))
    assert complementary_lifted_angle(z, n).phi_hat == pytest.approx(theta, abs=1e-9)


def test_half_pi_quadratic_exact():
    assert product_coefficients(math.pi / 2, 2) == [1, 0, -1]
    assert direct_coefficients(math.pi / 2, 2) == [1, 0, -1]


@settings(max_examples=200)
@given(st.floats(0.001, math.pi - 0.001), st.integers(1, 4))
def test_product_matches_direct(phi, p):
    prod = product_coefficients(phi, p)
    direct = direct_coefficients(phi, p)
    scale = sum(abs(float(c)) for c in direct)
    for a, b in zip(prod, direct):
        assert abs(float(a) - float(b)) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(wu_kahler_st(), wu_kahler_st(), st.floats(0.01, math.pi - 0.01))
def test_dhym_test_agreement(a, b, phi):
    m = wu_bundle(1, (1, 3))
    for v in m.candidates:
        t = dhym_test(m, a, b, phi, v)
        assert t.rel_error < 1e-9


def test_dhym_exact_at_half_pi(wu13):
    t = dhym_test(wu13, (1, 1), (1, Fraction(1, 2)), math.pi / 2, wu13.candidate("S"))
    assert t.exact is not None and t.rel_error == 0
    # int_S (alpha^2 - beta^2)
    assert t.exact == Fraction(3) - Fraction(5, 4)


def test_factor_classes_and_hypotheses(wu13):
    phi = 3 * math.pi / 4
    fc = dhym_factor_classes(wu13, (1, 1), (1, 1), phi)
    assert [f.p for f in fc] == [1, 2]
    assert fc[0].cot == -1  # exact snap
    assert fc[0].coords == (Fraction(2), Fraction(2)) and fc[0].verdict is Verdict.INSIDE
    h = dhym_hypothesis_check(wu13, (1, 1), (1, 1), phi)
    assert h.alpha_kahler and h.covered_by_theorem
    assert h.ok == (not h.failures)


def test_hypotheses_window_dimension_four():
    m = wu_bundle(1, (1, 2, 4))
    h = dhym_hypothesis_check(m, (1, 1), (1, 1), math.pi / 3)
    assert not h.window_ok and any("dimension 4" in f for f in h.failures)
    m5 = wu_bundle(1, (1, 2, 3, 4))
    assert not dhym_hypothesis_check(m5, (1, 1), (1, 1), 2.0).covered_by_theorem


def test_hypotheses_missing_cone_data():
    m = blowup_pn(3)
    h = dhym_hypothesis_check(m, (1, -Fraction(1, 2)), (1, -Fraction(1, 4)), 2.0)
    assert any("missing cone data" in f for f in h.failures)


def test_marginal_flag_near_zero():
    m = wu_bundle(1, (1, 3))
    rng = random.Random(2)
    for _ in range(20):
        phi = rng.uniform(0.1, 3.0)
        t = dhym_test(m, (1, 1), (1, 1), phi, m.candidate("C"))
        if t.marginal:
            assert abs(t.value) < 1e-9 * 10

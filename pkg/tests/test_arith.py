from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stability_lab.arith import (
    BiHomogPoly,
    NonFactorizableError,
    QuadraticSurd,
    RationalFormatError,
    RootHandle,
    RootSide,
    UniPoly,
    compare_roots,
    divide_out_linear,
    format_rational,
    isolate_largest_nonneg_root,
    isolate_positive_roots,
    parse_rational,
    sign_relative_to_root,
)

fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20))


@pytest.mark.parametrize("text,value", [("1/5", Fraction(1, 5)), ("-3", Fraction(-3)), (" 4/6 ", Fraction(2, 3)), ("0", Fraction(0))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "1/0", "x", "1.5e", "1//2"])
def test_parse_rational_rejects(text):
    with pytest.raises(RationalFormatError):
        parse_rational(text)


@given(fractions)
def test_format_parse_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_unipoly_arithmetic():
    p = UniPoly([1, 2, 1])  # (1+x)^2
    q = UniPoly([1, 1])
    quo, rem = p.divmod(q)
    assert quo == q and rem.is_zero
    assert p(Fraction(1, 2)) == Fraction(9, 4)
    assert p.derivative() == UniPoly([2, 2])
    assert p.gcd(UniPoly([-1, 0, 1])).monic() == UniPoly([1, 1])


@given(st.lists(fractions, min_size=1, max_size=6), fractions)
def test_eval_interval_encloses(coeffs, x):
    p = UniPoly(coeffs)
    lo, hi = p.eval_interval(x, x + Fraction(1, 7))
    for t in (x, x + Fraction(1, 14), x + Fraction(1, 7)):
        assert lo <= p(t) <= hi


def test_quadratic_surd_sign_and_ops():
    r = QuadraticSurd.sqrt(3)
    assert isinstance(r, QuadraticSurd)
    assert (r * r) == 3
    assert (r - Fraction(17, 10)).sign() == 1
    assert (r - Fraction(18, 10)).sign() == -1
    assert QuadraticSurd.sqrt(Fraction(9, 4)) == Fraction(3, 2)


def test_isolate_positive_roots_simple():
    # (x - 1)(x - 2)(x + 3)
    p = UniPoly([6, -7, 0, 1])
    roots = isolate_positive_roots(p)
    assert [float(r) for r in roots] == pytest.approx([1.0, 2.0])


def test_largest_root_exact_surd():
    # x^2/2 - x - 1 has positive root 1 + sqrt(3)
    h = UniPoly([-1, -1, Fraction(1, 2)])
    r = isolate_largest_nonneg_root(h)
    assert r.is_exact and not r.is_rational
    assert float(r) == pytest.approx(1 + 3**0.5)
    assert r.compare(Fraction(27, 10)) == 1 and r.compare(Fraction(28, 10)) == -1


def test_largest_root_zero_polynomial_like():
    assert isolate_largest_nonneg_root(UniPoly([0, 1])).exact == 0
    assert isolate_largest_nonneg_root(UniPoly([0, 0, 1])).exact == 0


def test_sign_relative_to_root():
    h = UniPoly([-2, 0, 1])  # root sqrt 2
    assert sign_relative_to_root(h, 1) is RootSide.BELOW
    assert sign_relative_to_root(h, 2) is RootSide.ABOVE
    assert sign_relative_to_root(UniPoly([-4, 0, 1]), 2) is RootSide.AT


@settings(max_examples=60, deadline=None)
@given(st.lists(st.builds(Fraction, st.integers(0, 20), st.integers(1, 9)), min_size=3, max_size=6))
def test_high_degree_root_is_a_root(cs):
    # x^p/p! - sum c_k x^(p-k)/(p-k)!, one sign change
    from math import factorial

    p = len(cs)
    coeffs = [Fraction(0)] * (p + 1)
    coeffs[p] = Fraction(1, factorial(p))
    for k, c in enumerate(cs, start=1):
        coeffs[p - k] -= c / factorial(p - k)
    h = UniPoly(coeffs)
    r = isolate_largest_nonneg_root(h)
    if r.is_rational:
        assert h(r.exact) == 0
    else:
        narrow = r.refine(Fraction(1, 10**20))
        assert narrow.lo <= narrow.hi
        vals = h(narrow.lo), h(narrow.hi)
        assert vals[0] == 0 or vals[1] == 0 or (vals[0] < 0) != (vals[1] < 0)


def test_compare_roots_equal_and_ordered():
    a = RootHandle.rational(1)
    b = isolate_largest_nonneg_root(UniPoly([-1, -1, Fraction(1, 2)]))
    assert compare_roots(a, b) == -1
    assert compare_roots(b, a) == 1
    assert compare_roots(b, b) == 0
    # same algebraic number from two different polynomials
    c = isolate_largest_nonneg_root(UniPoly([-2, 0, 1]))
    d = isolate_largest_nonneg_root(UniPoly([0, -2, 0, 1]))
    assert compare_roots(c, d) == 0


def test_divide_out_linear_exact():
    Q = BiHomogPoly((Fraction(-1), Fraction(-1), Fraction(1, 2)))
    r = isolate_largest_nonneg_root(Q.dehomogenize())
    f = divide_out_linear(Q, r)
    assert all(c.sign == 1 or c.sign == 0 for c in f.certificate)
    lo, hi = f.residual()
    assert lo == hi == 0
    for k, v in enumerate(f.reconstruction()):
        if k:
            assert (v.expr - UniPoly([Q.coeffs[k]])).is_zero


def test_divide_out_linear_rejects_negative_quotient():
    # x^2 - 3xy + 2y^2 = (x - y)(x - 2y): dividing by the smaller root leaves x - 2y
    Q = BiHomogPoly((Fraction(2), Fraction(-3), Fraction(1)))
    with pytest.raises(NonFactorizableError):
        divide_out_linear(Q, RootHandle.rational(1))


def test_bihomog_derivative():
    Q = BiHomogPoly((Fraction(1), Fraction(2), Fraction(3)))
    assert Q.derivative_x().coeffs == (Fraction(2), Fraction(6))


def test_sign_relative_to_root_agrees_with_float():
    import random
    from math import factorial

    rng = random.Random(78)
    for _ in range(10_000):
        p = rng.randint(1, 5)
        cs = [Fraction(rng.randint(0, 20), rng.randint(1, 10)) for _ in range(p)]
        if not any(cs):
            cs[0] = Fraction(1)
        coeffs = [Fraction(0)] * (p + 1)
        coeffs[p] = Fraction(1, factorial(p))
        for k, c in enumerate(cs, start=1):
            coeffs[p - k] -= c / factorial(p - k)
        h = UniPoly(coeffs)
        r = float(isolate_largest_nonneg_root(h))
        q = Fraction(rng.randint(0, 400), rng.randint(1, 40))
        side = sign_relative_to_root(h, q)
        if abs(float(q) - r) > 1e-9 * max(1.0, r):
            assert (side is RootSide.ABOVE) == (float(q) > r)

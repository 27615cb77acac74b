from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stability_lab.cones import projection
from stability_lab.geometry import CohClass, DegenerateCandidateError, blowup_pn, wu_bundle
from stability_lab.jstab import (
    Status,
    classify,
    double_inequality_check,
    effective_test,
    slope,
    slope_report,
    stability_threshold,
)

from conftest import blowup_kahler_st, positive_rationals, wu_kahler_st

A = (1, 1)


def beta(b):
    return (1, Fraction(b))


@pytest.mark.parametrize(
    "b,dest,dest_opt,delta,status",
    [
        ("1/10", ("C", "S"), ("C",), Fraction(-11, 70), Status.UNSTABLE),
        ("5/26", ("C", "S"), ("C",), Fraction(-1, 26), Status.UNSTABLE),
        ("1/5", ("C",), ("C",), Fraction(-1, 35), Status.UNSTABLE),
        ("2/9", ("C",), ("C",), Fraction(0), Status.SEMISTABLE),
        ("1/4", (), (), Fraction(1, 28), Status.STABLE),
    ],
)
def test_table_points(wu13, b, dest, dest_opt, delta, status):
    v = classify(wu13, A, beta(Fraction(b)))
    assert set(v.dest) == set(dest)
    assert v.dest_opt == dest_opt
    assert v.delta_pp == delta
    assert v.status is status


def test_slope_values(wu13):
    assert slope(wu13, A, beta(Fraction(1, 6))) == Fraction(6, 7)
    assert slope(wu13, A, A) == 3
    assert slope(wu13, A, A, wu13.candidate("C")) == 1


def test_slope_degenerate(wu13):
    with pytest.raises(DegenerateCandidateError):
        slope(wu13, (0, 1), A, wu13.candidate("C"))


@given(wu_kahler_st(), wu_kahler_st(), positive_rationals())
def test_slope_homogeneity(a, b, s):
    m = wu_bundle(1, (1, 3))
    assert slope(m, a * s, b) == slope(m, a, b) / s
    assert slope(m, a, b * s) == slope(m, a, b) * s
    # mu(alpha, alpha) = n on X and dim V on candidates
    assert slope(m, a, a) == 3
    for v in m.candidates:
        assert slope(m, a, a, v) == v.dim


@given(wu_kahler_st(), wu_kahler_st())
def test_dest_matches_deficit_sign(a, b):
    m = wu_bundle(1, (1, 3))
    v = classify(m, a, b)
    for c in v.report.candidates:
        assert (c.name in v.dest) == (c.deficit <= 0)
    assert (v.status is Status.STABLE) == (not v.dest)
    if v.delta_pp <= 0:
        assert set(v.dest_opt) <= set(v.dest)


@given(blowup_kahler_st(), blowup_kahler_st())
def test_threshold_is_min_deficit_blowup(a, b):
    m = blowup_pn(3)
    rep = slope_report(m, a, b)
    assert stability_threshold(m, a, b) == min(c.deficit for c in rep.candidates)


def test_empty_candidate_list(wu13):
    with pytest.raises(ValueError):
        stability_threshold(wu13.with_candidates([]), A, A)


def test_effective_test(wu13):
    ok = effective_test(wu13, A, beta(Fraction(1, 4)))
    assert ok.verdict == "solvable" and ok.certified
    bad = effective_test(wu13, A, beta(Fraction(1, 5)))
    assert bad.verdict == "not-solvable" and bad.witnesses == ("C",)
    rel = effective_test(wu13, A, beta(Fraction(1, 20)))
    assert rel.verdict.startswith("relative-")
    other = effective_test(blowup_pn(3), (1, -Fraction(1, 4)), (1, -Fraction(1, 2)))
    assert other.verdict.startswith("relative-")


def test_verdict_json_keys(wu13):
    doc = classify(wu13, A, beta(Fraction(1, 5))).to_json()
    assert set(doc) == {"mu", "candidates", "delta_pp", "dest", "dest_opt", "status", "completeness"}
    assert doc["delta_pp"] == "-1/35"


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([Fraction(1, 10), Fraction(1, 5), Fraction(1, 2)]), st.integers(1, 63))
def test_double_inequality_on_wu(b, k):
    m = wu_bundle(1, (1, 3))
    eta = projection(m, A, beta(b))
    r = double_inequality_check(m, eta, beta(b), Fraction(k, 64))
    assert r.result == "holds"
    assert r.lower <= r.delta_pp <= r.upper


def test_double_inequality_inapplicable(wu13):
    b = beta(Fraction(3, 2))
    eta = projection(wu13, A, b)
    assert double_inequality_check(wu13, eta, b, Fraction(1, 2)).result == "inapplicable"
    with pytest.raises(ValueError):
        double_inequality_check(wu13, eta, b, 0)


def test_double_inequality_failure_flag_consistency(wu13):
    # a thinned candidate list; any failure must carry a consistent flag
    m = wu13.with_candidates([wu13.candidate("C"), wu13.candidate("F")])
    b = beta(Fraction(1, 10))
    eta = projection(m, A, b)
    results = [double_inequality_check(m, eta, b, Fraction(k, 16)) for k in range(1, 16)]
    for r in results:
        if r.result == "fails":
            assert r.incomplete_candidates == (r.delta_pp > r.upper)

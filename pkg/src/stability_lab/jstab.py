"""J-equation slopes, stability thresholds and destabilizer sets over candidate lists."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .arith import Number, format_rational
from .cones import HypothesisVerdict, Verdict, check_modified_hypotheses
from .geometry import (
    ArityError,
    CohClass,
    DegenerateCandidateError,
    ManifoldPresentation,
    SubvarietyCandidate,
)

__all__ = [
    "Status",
    "CandidateSlope",
    "SlopeReport",
    "StabilityVerdict",
    "EffectiveResult",
    "DoubleInequality",
    "slope",
    "slope_report",
    "stability_threshold",
    "classify",
    "effective_test",
    "double_inequality_check",
]


class Status(str, enum.Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable"
    UNSTABLE = "unstable"


def slope(
    m: ManifoldPresentation, alpha, beta, v: Union[SubvarietyCandidate, None] = None
) -> Fraction:
    """``p * (alpha^(p-1) . beta . V) / (alpha^p . V)``; the whole manifold when ``v`` is None."""
    obj = m if v is None else v
    p = obj.dim
    den, w = obj.alpha_data(tuple(alpha))
    if den == 0:
        name = m.name if v is None else v.name
        raise DegenerateCandidateError(f"{name}: alpha^{p} pairs to zero")
    if len(beta) != len(w):
        raise ArityError(f"class of length {len(beta)} for a basis of size {len(w)}")
    return p * sum((x * y for x, y in zip(w, beta)), Fraction(0)) / den


@dataclass(frozen=True)
class CandidateSlope:
    name: str
    dim: int
    mu: Fraction
    deficit: Fraction

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim, "mu": format_rational(self.mu), "deficit": format_rational(self.deficit)}


@dataclass(frozen=True)
class SlopeReport:
    mu: Fraction
    candidates: tuple

    @property
    def delta_pp(self) -> Fraction:
        return min(c.deficit for c in self.candidates)


def slope_report(m: ManifoldPresentation, alpha, beta, candidates: Union[Iterable[SubvarietyCandidate], None] = None) -> SlopeReport:
    n = m.dim
    mu = slope(m, alpha, beta)
    rows = []
    for v in m.candidates if candidates is None else candidates:
        mv = slope(m, alpha, beta, v)
        rows.append(CandidateSlope(v.name, v.dim, mv, (mu - mv) / (n - v.dim)))
    return SlopeReport(mu, tuple(rows))


def stability_threshold(m: ManifoldPresentation, alpha, beta) -> Fraction:
    """Minimum normalized deficit over the candidate list (an upper bound for the true infimum)."""
    if not m.candidates:
        raise ValueError("stability threshold over an empty candidate list")
    return slope_report(m, alpha, beta).delta_pp


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    mu: Fraction
    delta_pp: Fraction
    dest: tuple
    dest_opt: tuple
    completeness: str
    report: SlopeReport

    def to_json(self) -> dict:
        return {
            "mu": format_rational(self.mu),
            "candidates": [c.to_json() for c in self.report.candidates],
            "delta_pp": format_rational(self.delta_pp),
            "dest": list(self.dest),
            "dest_opt": list(self.dest_opt),
            "status": self.status.value,
            "completeness": self.completeness,
        }


def classify(m: ManifoldPresentation, alpha, beta) -> StabilityVerdict:
    if not m.candidates:
        raise ValueError("classification over an empty candidate list")
    rep = slope_report(m, alpha, beta)
    delta = rep.delta_pp
    dest = tuple(c.name for c in rep.candidates if rep.mu <= c.mu)
    dest_opt = tuple(c.name for c in rep.candidates if c.deficit == delta) if delta <= 0 else ()
    if delta > 0:
        status = Status.STABLE
    elif delta == 0:
        status = Status.SEMISTABLE
    else:
        status = Status.UNSTABLE
    return StabilityVerdict(status, rep.mu, delta, dest, dest_opt, m.completeness(alpha, beta, "j"), rep)


@dataclass(frozen=True)
class EffectiveResult:
    verdict: str
    witnesses: tuple
    hypotheses: tuple
    completeness: str

    @property
    def certified(self) -> bool:
        return not self.verdict.startswith("relative")

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witnesses": list(self.witnesses),
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "completeness": self.completeness,
        }


def effective_test(m: ManifoldPresentation, alpha, beta, lam: Number = 0) -> EffectiveResult:
    """Finite solvability test: ``mu > mu(V)`` for every candidate.

    The verdict is definitive only when every modified-cone hypothesis for the
    shift ``lam`` is satisfied and the candidate list is certified complete at
    ``(alpha, beta)``; otherwise it is prefixed with ``relative-``.
    """
    rep = slope_report(m, alpha, beta)
    witnesses = tuple(c.name for c in rep.candidates if c.mu >= rep.mu)
    hyps = tuple(check_modified_hypotheses(m, alpha, beta, lam))
    completeness = m.completeness(alpha, beta, "j")
    ok = all(h.verdict is Verdict.INSIDE for h in hyps) and completeness == "certified"
    verdict = "not-solvable" if witnesses else "solvable"
    if not ok:
        verdict = "relative-" + verdict
    return EffectiveResult(verdict, witnesses, hyps, completeness)


@dataclass(frozen=True)
class DoubleInequality:
    result: str
    t: Fraction
    lower: Fraction
    delta_pp: Fraction
    upper: Fraction
    completeness: str
    incomplete_candidates: bool = False

    def to_json(self) -> dict:
        return {
            "result": self.result,
            "t": format_rational(self.t),
            "lower": format_rational(self.lower),
            "delta_pp": format_rational(self.delta_pp),
            "upper": format_rational(self.upper),
            "completeness": self.completeness,
            "incomplete_candidates": self.incomplete_candidates,
        }


def _default_scan() -> list[Fraction]:
    return [Fraction(k, 64) for k in range(1, 64)]


def double_inequality_check(
    m: ManifoldPresentation,
    eta,
    beta,
    t: Number,
    scan: Union[Sequence[Number], None] = None,
) -> DoubleInequality:
    """Check ``mu - (n-1)/t <= Delta(alpha_t) <= (mu - 1/t)/(n-1)`` on ``alpha_t = (1-t) eta + t beta``.

    ``mu`` is the slope of ``(alpha_t, beta)``.  The bounds are only claimed when
    the threshold is nonpositive somewhere on the path; ``scan`` lists the
    parameters searched for such a point.  A failure of the upper bound means
    the candidate list misses a destabilizer and raises the incompleteness flag.
    """
    t = Fraction(t)
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    n = m.dim
    eta, beta = CohClass(eta), CohClass(beta)

    def alpha_at(s: Fraction) -> CohClass:
        return eta * (1 - s) + beta * s

    a = alpha_at(t)
    mu = slope(m, a, beta)
    delta = stability_threshold(m, a, beta)
    lower = mu - (n - 1) / t
    upper = (mu - 1 / t) / (n - 1)
    completeness = m.completeness(a, beta, "j")
    points = [Fraction(s) for s in (scan if scan is not None else _default_scan())] + [t]
    applicable = any(0 < s < 1 and stability_threshold(m, alpha_at(s), beta) <= 0 for s in points)
    if not applicable:
        return DoubleInequality("inapplicable", t, lower, delta, upper, completeness)
    if lower <= delta <= upper:
        return DoubleInequality("holds", t, lower, delta, upper, completeness)
    return DoubleInequality("fails", t, lower, delta, upper, completeness, incomplete_candidates=delta > upper)

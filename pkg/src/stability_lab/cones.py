"""Polyhedral cone descriptions, membership oracles and the nef projection.

Cones are conjunctions of linear inequalities on basis coordinates.  Verdicts
are exact: a class is ``inside`` the interior, on the ``boundary`` or
``outside``; strictness of an inequality only matters for :func:`contains`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence, Union

from .arith import format_rational, parse_rational

if TYPE_CHECKING:  # pragma: no cover
    from .geometry import CohClass, ManifoldPresentation

__all__ = [
    "Verdict",
    "Inequality",
    "ConeDescription",
    "MissingConeDataError",
    "cone_key",
    "in_cone",
    "in_cone_float",
    "contains",
    "projection",
    "check_modified_hypotheses",
    "HypothesisVerdict",
]

KINDS = ("kahler", "nef", "pseff", "big", "modified")


class Verdict(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class MissingConeDataError(KeyError):
    """The presentation carries no description for the requested cone."""


def cone_key(kind: str, p: Union[int, None] = None) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown cone kind {kind!r}")
    if kind == "modified":
        if p is None:
            raise ValueError("modified cones need p")
        return f"modified:{int(p)}"
    return kind


@dataclass(frozen=True)
class Inequality:
    """``sum coeffs[i] * x[i] > 0`` (strict) or ``>= 0``."""

    coeffs: tuple
    strict: bool = True

    def __init__(self, coeffs: Sequence, strict: bool = True):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        object.__setattr__(self, "strict", bool(strict))

    def value(self, coords: Sequence):
        return sum(c * x for c, x in zip(self.coeffs, coords))

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self.coeffs], "strict": self.strict}

    @classmethod
    def from_json(cls, doc: dict) -> "Inequality":
        return cls([parse_rational(c) for c in doc["coeffs"]], doc.get("strict", True))


@dataclass(frozen=True)
class ConeDescription:
    kind: str
    inequalities: tuple
    p: Union[int, None] = None

    @property
    def key(self) -> str:
        return cone_key(self.kind, self.p)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        out["ineqs"] = [q.to_json() for q in self.inequalities]
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "ConeDescription":
        kind = doc["kind"]
        p = doc.get("p")
        cone_key(kind, p)
        return cls(kind, tuple(Inequality.from_json(q) for q in doc["ineqs"]), p)


def _verdict_from_values(values) -> Verdict:
    if any(v < 0 for v in values):
        return Verdict.OUTSIDE
    if any(v == 0 for v in values):
        return Verdict.BOUNDARY
    return Verdict.INSIDE


def _description(m: "ManifoldPresentation", kind: str, p=None) -> ConeDescription:
    key = cone_key(kind, p)
    try:
        return m.cones[key]
    except KeyError:
        raise MissingConeDataError(f"{m.name}: no cone data for {key}") from None


def in_cone(m: "ManifoldPresentation", kind: str, c, p: Union[int, None] = None) -> Verdict:
    """Exact three-way membership verdict for the class ``c``."""
    desc = _description(m, kind, p)
    coords = tuple(c)
    return _verdict_from_values([q.value(coords) for q in desc.inequalities])


def contains(m: "ManifoldPresentation", kind: str, c, p: Union[int, None] = None) -> bool:
    """Set membership, honouring strict versus non-strict inequalities."""
    desc = _description(m, kind, p)
    coords = tuple(c)
    for q in desc.inequalities:
        v = q.value(coords)
        if v < 0 or (v == 0 and q.strict):
            return False
    return True


def in_cone_float(
    m: "ManifoldPresentation", kind: str, c, p: Union[int, None] = None, eps: float = 1e-9
) -> tuple[Verdict, bool]:
    """Verdict for float coordinates plus a flag set when some form is within ``eps`` of 0."""
    desc = _description(m, kind, p)
    values = [float(sum(float(a) * float(x) for a, x in zip(q.coeffs, c))) for q in desc.inequalities]
    marginal = any(abs(v) < eps for v in values)
    snapped = [0.0 if abs(v) < eps else v for v in values]
    return _verdict_from_values(snapped), marginal


def _proportional(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(i + 1, n))


def projection(m: "ManifoldPresentation", alpha, beta):
    """Nef, non-Kähler class on the ray ``alpha - s*beta`` leaving the nef cone.

    Among the rays ``c2*alpha + c1*beta`` with ``c2 > 0`` exactly one lies on the
    boundary of the nef cone (restricted to the plane), namely the one with
    ``c1 < 0``, reached at ``s* = min ell(alpha)/ell(beta)`` over the nef
    inequalities with ``ell(beta) > 0``.  The result is scaled so that its
    largest absolute coordinate is 1.
    """
    from .geometry import CohClass

    desc = _description(m, "nef")
    for kind in ("kahler",):
        if in_cone(m, kind, alpha) is not Verdict.INSIDE or in_cone(m, kind, beta) is not Verdict.INSIDE:
            raise ValueError("projection needs alpha and beta strictly inside the Kähler cone")
    a, b = tuple(alpha), tuple(beta)
    if _proportional(a, b):
        raise ValueError("alpha is proportional to beta: no unique boundary ray")
    ratios = [q.value(a) / q.value(b) for q in desc.inequalities if q.value(b) > 0]
    if not ratios:
        raise ValueError("nef cone is unbounded along -beta; no boundary ray")
    s = min(ratios)
    eta = [x - s * y for x, y in zip(a, b)]
    top = max(abs(x) for x in eta)
    return CohClass(x / top for x in eta)


@dataclass(frozen=True)
class HypothesisVerdict:
    p: int
    klass: tuple
    verdict: Union[Verdict, None]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "class": [format_rational(x) for x in self.klass],
            "verdict": self.verdict.value if self.verdict else "missing-cone-data",
        }


def check_modified_hypotheses(m: "ManifoldPresentation", alpha, beta, shift=0) -> list[HypothesisVerdict]:
    """Verdicts for ``(mu - (n-p)*shift)*alpha - p*beta`` in the (p+1)-modified cone.

    ``shift = 0`` is the plain positivity hypothesis on ``mu*alpha - p*beta``;
    passing the stability threshold as ``shift`` gives the optimal-destabilizer
    variant.  A missing cone description yields ``verdict=None`` for that p.
    """
    from .jstab import slope

    n = m.dim
    mu = slope(m, alpha, beta)
    shift = Fraction(shift)
    out = []
    for p in range(1, n):
        coef = mu - (n - p) * shift
        klass = tuple(coef * x - p * y for x, y in zip(alpha, beta))
        try:
            v = in_cone(m, "modified", klass, p + 1)
        except MissingConeDataError:
            v = None
        out.append(HypothesisVerdict(p, klass, v))
    return out

"""Exact walls and chambers along one-parameter families.

Along ``beta(t) = (1-t) beta0 + t beta1`` every slope is affine in ``t`` (the
denominator only involves ``alpha``), and along an affine coefficient path
every gMA test is affine in ``t``.  Walls are therefore exact rationals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .arith import Number, format_rational
from .cones import Verdict, in_cone
from .geometry import CohClass, ManifoldPresentation, SubvarietyCandidate
from .gma import GmaCoefficients, classify_gma, gma_test, solve_top_constant
from .jstab import classify, slope

__all__ = [
    "MissedWallError",
    "ParameterSegment",
    "CoefficientPath",
    "WallSource",
    "Wall",
    "Chamber",
    "ChamberReport",
    "j_walls",
    "chambers",
    "gma_walls",
    "gma_chambers",
    "sweep_oracle",
    "gma_sweep_oracle",
    "oracle_mismatches",
]


class MissedWallError(RuntimeError):
    """A verdict changed inside a chamber: some wall was not found."""


@dataclass(frozen=True)
class ParameterSegment:
    beta0: CohClass
    beta1: CohClass

    @classmethod
    def checked(cls, m: ManifoldPresentation, beta0, beta1) -> "ParameterSegment":
        b0, b1 = CohClass(beta0), CohClass(beta1)
        for b in (b0, b1):
            if in_cone(m, "kahler", b) is not Verdict.INSIDE:
                raise ValueError(f"segment endpoint {b} is not Kähler")
        return cls(b0, b1)

    def at(self, t: Number) -> CohClass:
        t = Fraction(t)
        return self.beta0 * (1 - t) + self.beta1 * t

    def varying(self) -> list[int]:
        return [i for i, (a, b) in enumerate(zip(self.beta0, self.beta1)) if a != b]

    @property
    def degenerate(self) -> bool:
        return self.beta0 == self.beta1


@dataclass(frozen=True)
class CoefficientPath:
    """``c(t) = (1-t) c0 + t c1`` for ``c_1..c_{n-1}``."""

    c0: tuple
    c1: tuple

    def __init__(self, c0: Sequence[Number], c1: Sequence[Number]):
        a = tuple(Fraction(x) for x in c0)
        b = tuple(Fraction(x) for x in c1)
        if len(a) != len(b):
            raise ValueError("path endpoints have different lengths")
        if any(x < 0 for x in a + b):
            raise ValueError("coefficient path leaves the nonnegative orthant")
        object.__setattr__(self, "c0", a)
        object.__setattr__(self, "c1", b)

    def at(self, t: Number) -> GmaCoefficients:
        t = Fraction(t)
        return GmaCoefficients([(1 - t) * x + t * y for x, y in zip(self.c0, self.c1)])


@dataclass(frozen=True)
class WallSource:
    candidate: str
    alpha_index: int
    f0: Fraction
    f1: Fraction

    def value(self, t: Fraction) -> Fraction:
        return (1 - t) * self.f0 + t * self.f1

    def label(self) -> str:
        return f"{self.candidate}@alpha{self.alpha_index}"


@dataclass(frozen=True)
class Wall:
    t: Fraction
    sources: tuple

    def to_json(self, seg: Union[ParameterSegment, None] = None) -> dict:
        out = {"t": format_rational(self.t), "sources": [s.label() for s in self.sources]}
        if seg is not None:
            out["beta"] = seg.at(self.t).to_json()
        return out


@dataclass(frozen=True)
class Chamber:
    lo: Fraction
    hi: Fraction
    verdicts: tuple  # per alpha: (status, dest names)

    @property
    def stable_set(self) -> tuple:
        return tuple(i for i, (status, _) in enumerate(self.verdicts) if status == "stable")

    def to_json(self) -> dict:
        return {
            "t_lo": format_rational(self.lo),
            "t_hi": format_rational(self.hi),
            "verdicts": [{"status": s, "dest": list(d)} for s, d in self.verdicts],
            "stable_alphas": list(self.stable_set),
        }


@dataclass(frozen=True)
class ChamberReport:
    walls: tuple
    chambers: tuple
    degenerate_sources: tuple = ()
    spurious: tuple = ()
    segment: Union[ParameterSegment, None] = None

    def wall_values(self) -> list[str]:
        """Wall positions in the single varying coordinate when there is one, else ``t``."""
        if self.segment is not None:
            var = self.segment.varying()
            if len(var) == 1:
                return [format_rational(self.segment.at(w.t)[var[0]]) for w in self.walls]
        return [format_rational(w.t) for w in self.walls]

    def to_json(self) -> dict:
        return {
            "walls": self.wall_values(),
            "wall_detail": [w.to_json(self.segment) for w in self.walls],
            "chambers": [c.to_json() for c in self.chambers],
            "degenerate_sources": [s.label() for s in self.degenerate_sources],
            "spurious_walls": [format_rational(t) for t in self.spurious],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        k = len(self.chambers[0].verdicts) if self.chambers else 0
        cols = ["t_lo", "t_hi", "wall_source"]
        cols += [f"status_alpha{i}" for i in range(k)] + [f"dest_alpha{i}" for i in range(k)]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        by_t = {wall.t: wall for wall in self.walls}
        for c in self.chambers:
            wall = by_t.get(c.hi)
            src = ";".join(s.label() for s in wall.sources) if wall else ""
            row = [format_rational(c.lo), format_rational(c.hi), src]
            row += [s for s, _ in c.verdicts] + [";".join(d) for _, d in c.verdicts]
            w.writerow(row)
        return buf.getvalue()

    def plot_data(self) -> dict:
        return {
            "walls": [format_rational(w.t) for w in self.walls],
            "wall_values": self.wall_values(),
            "chambers": [
                {
                    "t_lo": format_rational(c.lo),
                    "t_hi": format_rational(c.hi),
                    "label": " | ".join(f"{s}:{','.join(d) or '-'}" for s, d in c.verdicts),
                }
                for c in self.chambers
            ],
        }


def _merge(sources: list[tuple[Fraction, WallSource]]) -> tuple:
    grouped: dict = {}
    for t, s in sources:
        grouped.setdefault(t, []).append(s)
    return tuple(Wall(t, tuple(grouped[t])) for t in sorted(grouped))


def _affine_zero(f0: Fraction, f1: Fraction) -> Union[Fraction, None]:
    if f0 == f1:
        return None
    t = f0 / (f0 - f1)
    return t if 0 <= t <= 1 else None


def _candidates(m: ManifoldPresentation, candidates) -> tuple:
    if candidates is None:
        return m.candidates
    return tuple(m.candidate(c) if isinstance(c, str) else c for c in candidates)


def _j_sources(m, alphas, seg, candidates):
    found, degenerate = [], []
    for i, alpha in enumerate(alphas):
        mu0, mu1 = slope(m, alpha, seg.beta0), slope(m, alpha, seg.beta1)
        for v in candidates:
            f0 = mu0 - slope(m, alpha, seg.beta0, v)
            f1 = mu1 - slope(m, alpha, seg.beta1, v)
            src = WallSource(v.name, i, f0, f1)
            if f0 == f1 == 0:
                degenerate.append(src)
                continue
            t = _affine_zero(f0, f1)
            if t is not None:
                found.append((t, src))
    return found, degenerate


def j_walls(
    m: ManifoldPresentation,
    alphas: Sequence,
    seg: ParameterSegment,
    candidates: Union[Sequence, None] = None,
) -> list[Wall]:
    """Exact zeros in [0, 1] of ``mu - mu(V)`` for every (alpha, V), merged by location."""
    found, _ = _j_sources(m, [CohClass(a) for a in alphas], seg, _candidates(m, candidates))
    return list(_merge(found))


def _restricted(m: ManifoldPresentation, candidates) -> ManifoldPresentation:
    return m if candidates is None else m.with_candidates(_candidates(m, candidates))


def _j_verdicts(m: ManifoldPresentation, alphas, beta) -> tuple:
    out = []
    for a in alphas:
        v = classify(m, a, beta)
        out.append((v.status.value, v.dest))
    return tuple(out)


def _build_chambers(walls, verdict_at, degenerate_segment: bool) -> tuple[tuple, tuple]:
    cuts = [Fraction(0)] + [w.t for w in walls if 0 < w.t < 1] + [Fraction(1)]
    if degenerate_segment:
        cuts = [Fraction(0), Fraction(1)]
    result = []
    for lo, hi in zip(cuts, cuts[1:]):
        samples = [lo + (hi - lo) * Fraction(k, 4) for k in (1, 2, 3)]
        verdicts = [verdict_at(t) for t in samples]
        if any(v != verdicts[1] for v in verdicts):
            raise MissedWallError(f"verdict changes inside ({lo}, {hi})")
        result.append(Chamber(lo, hi, verdicts[1]))
    spurious = tuple(
        a.hi for a, b in zip(result, result[1:]) if a.verdicts == b.verdicts
    )
    return tuple(result), spurious


def chambers(
    m: ManifoldPresentation,
    alphas: Sequence,
    seg: ParameterSegment,
    candidates: Union[Sequence, None] = None,
) -> ChamberReport:
    """Chambers between consecutive walls, each verified constant at three interior points."""
    alphas = [CohClass(a) for a in alphas]
    sub = _restricted(m, candidates)
    if not sub.candidates:
        walls, degenerate = (), []
    else:
        found, degenerate = _j_sources(sub, alphas, seg, sub.candidates)
        walls = _merge(found)
    if not sub.candidates:
        def verdict_at(t):
            return tuple(("stable", ()) for _ in alphas)
    else:
        def verdict_at(t):
            return _j_verdicts(sub, alphas, seg.at(t))
    chs, spurious = _build_chambers(walls, verdict_at, seg.degenerate)
    return ChamberReport(tuple(walls), chs, tuple(degenerate), spurious, seg)


def sweep_oracle(
    m: ManifoldPresentation,
    alphas: Sequence,
    seg: ParameterSegment,
    N: int,
    candidates: Union[Sequence, None] = None,
) -> list[tuple[Fraction, tuple]]:
    """Direct classification at ``t = k/N`` for ``k = 0..N``."""
    if N < 1:
        raise ValueError("grid needs N >= 1")
    alphas = [CohClass(a) for a in alphas]
    sub = _restricted(m, candidates)
    rows = []
    for k in range(N + 1):
        t = Fraction(k, N)
        if sub.candidates:
            rows.append((t, _j_verdicts(sub, alphas, seg.at(t))))
        else:
            rows.append((t, tuple(("stable", ()) for _ in alphas)))
    return rows


def oracle_mismatches(report: ChamberReport, rows: Sequence[tuple[Fraction, tuple]]) -> list[Fraction]:
    """Grid points (off the walls) where the chamber verdict disagrees with the oracle."""
    wall_ts = {w.t for w in report.walls}
    bad = []
    for t, verdict in rows:
        if t in wall_ts:
            continue
        for c in report.chambers:
            if c.lo <= t <= c.hi:
                if c.verdicts != verdict:
                    bad.append(t)
                break
    return bad


# ---------------------------------------------------------------------------
# gMA coefficient paths
# ---------------------------------------------------------------------------


def gma_walls(
    m: ManifoldPresentation,
    alpha,
    beta,
    path: CoefficientPath,
    candidates: Union[Sequence, None] = None,
) -> tuple[list[Wall], list[WallSource]]:
    """Zeros of ``t -> int_V Q_p(alpha, beta; c(t))``; also returns identically-zero sources."""
    if len(path.c0) != m.dim - 1:
        raise ValueError(f"path has {len(path.c0)} coefficients, need {m.dim - 1}")
    found, degenerate = [], []
    for v in _candidates(m, candidates):
        g0 = gma_test(m, alpha, beta, path.at(0), v)
        g1 = gma_test(m, alpha, beta, path.at(1), v)
        src = WallSource(v.name, 0, g0, g1)
        if g0 == g1 == 0:
            degenerate.append(src)
            continue
        t = _affine_zero(g0, g1)
        if t is not None:
            found.append((t, src))
    return list(_merge(found)), degenerate


def _gma_verdict(m, alpha, beta, c: GmaCoefficients) -> tuple:
    g = solve_top_constant(m, alpha, beta, c)
    v = classify_gma(m, alpha, beta, g, with_factors=False)
    return ((v.status.value, v.dest),)


def gma_chambers(
    m: ManifoldPresentation,
    alpha,
    beta,
    path: CoefficientPath,
    candidates: Union[Sequence, None] = None,
) -> ChamberReport:
    sub = _restricted(m, candidates)
    walls, degenerate = gma_walls(sub, alpha, beta, path)
    chs, spurious = _build_chambers(
        walls, lambda t: _gma_verdict(sub, alpha, beta, path.at(t)), path.c0 == path.c1
    )
    return ChamberReport(tuple(walls), chs, tuple(degenerate), spurious, None)


def gma_sweep_oracle(
    m: ManifoldPresentation,
    alpha,
    beta,
    path: CoefficientPath,
    N: int,
    candidates: Union[Sequence, None] = None,
) -> list[tuple[Fraction, tuple]]:
    if N < 1:
        raise ValueError("grid needs N >= 1")
    sub = _restricted(m, candidates)
    return [(Fraction(k, N), _gma_verdict(sub, alpha, beta, path.at(Fraction(k, N)))) for k in range(N + 1)]

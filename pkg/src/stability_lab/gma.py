"""Generalized Monge-Ampère data with constant top coefficient.

For coefficients ``c_1..c_{n-1} >= 0`` the degree-p part of
``exp(x) * (1 - sum c_k y^k)`` is

    Q_p(x, y) = x^p/p! - sum_{k<=p} c_k x^(p-k) y^k / (p-k)!

and ``h_p = Q_p(x, 1)`` has one sign change, hence a unique positive root
``r_p`` whenever some ``c_k`` with ``k <= p`` is nonzero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Union

from .arith import (
    BiHomogPoly,
    LinearFactorization,
    Number,
    RootHandle,
    UniPoly,
    compare_roots,
    divide_out_linear,
    format_rational,
    isolate_largest_nonneg_root,
    parse_rational,
)
from .cones import MissingConeDataError, Verdict, _description
from .geometry import ArityError, ManifoldPresentation, SubvarietyCandidate, power_pairings

__all__ = [
    "GmaCoefficients",
    "FactorData",
    "GmaVerdict",
    "InverseHessian",
    "ZDatum",
    "q_polynomial",
    "solve_top_constant",
    "factorize",
    "gma_test",
    "classify_gma",
    "tau_cone_verdict",
    "inverse_hessian",
    "from_z_datum",
]


@dataclass(frozen=True)
class GmaCoefficients:
    """``c = (c_1, ..., c_{n-1})`` and the top constant ``c_n`` (None until solved)."""

    c: tuple
    c_n: Union[Fraction, None] = None

    def __init__(self, c: Sequence[Number], c_n: Union[Number, None] = None):
        cs = tuple(parse_rational(x) if isinstance(x, str) else Fraction(x) for x in c)
        if not cs:
            raise ValueError("need at least c_1 (n >= 2)")
        if any(x < 0 for x in cs):
            raise ValueError("c_1..c_{n-1} must be nonnegative")
        object.__setattr__(self, "c", cs)
        object.__setattr__(self, "c_n", None if c_n is None else Fraction(c_n))

    @property
    def n(self) -> int:
        return len(self.c) + 1

    def to_json(self) -> dict:
        return {
            "c": [format_rational(x) for x in self.c],
            "c_n": None if self.c_n is None else format_rational(self.c_n),
        }


def q_polynomial(p: int, coeffs: Union[GmaCoefficients, Sequence[Number]]) -> BiHomogPoly:
    c = coeffs.c if isinstance(coeffs, GmaCoefficients) else tuple(Fraction(x) for x in coeffs)
    if not 1 <= p <= len(c):
        raise ValueError(f"p={p} out of range 1..{len(c)}")
    cs = [Fraction(0)] * (p + 1)
    cs[p] = Fraction(1, factorial(p))
    for k in range(1, p + 1):
        cs[p - k] -= c[k - 1] / factorial(p - k)
    return BiHomogPoly(tuple(cs))


def solve_top_constant(m: ManifoldPresentation, alpha, beta, coeffs: Union[GmaCoefficients, Sequence[Number]]) -> GmaCoefficients:
    """Fill in ``c_n`` from ``int a^n/n! = sum c_k/(n-k)! int b^k a^(n-k) + c_n int b^n``."""
    g = coeffs if isinstance(coeffs, GmaCoefficients) else GmaCoefficients(coeffs)
    n = m.dim
    if g.n != n:
        raise ArityError(f"{len(g.c)} coefficients for a manifold of dimension {n}")
    pair = power_pairings(m, alpha, beta)  # pair[i] = int alpha^i beta^(n-i)
    if pair[0] == 0:
        raise ValueError("int beta^n vanishes; top constant undetermined")
    rhs = sum(g.c[k - 1] / factorial(n - k) * pair[n - k] for k in range(1, n))
    c_n = (pair[n] / factorial(n) - rhs) / pair[0]
    residual = pair[n] / factorial(n) - rhs - c_n * pair[0]
    if residual != 0:  # pragma: no cover
        raise ArithmeticError("cohomological constraint not satisfied")
    return GmaCoefficients(g.c, c_n)


@dataclass(frozen=True)
class FactorData:
    """Per dimension ``p``: the root ``r_p`` and ``Q_p = (x - r_p y) * Q~_p``."""

    roots: tuple
    factorizations: tuple

    def root(self, p: int) -> RootHandle:
        return self.roots[p - 1]

    def tau(self, p: int, alpha, beta) -> tuple:
        """Float approximation of ``alpha - r_p * beta``."""
        r = float(self.roots[p - 1])
        return tuple(float(a) - r * float(b) for a, b in zip(alpha, beta))

    def to_json(self) -> list:
        out = []
        for p, (r, f) in enumerate(zip(self.roots, self.factorizations), start=1):
            out.append(
                {
                    "p": p,
                    "r_p": r.to_json(),
                    "r_p_approx": float(r),
                    "q_tilde": [v.to_json() for v in f.quotient.coeffs],
                    "certificate": [[c.index, c.sign, c.method] for c in f.certificate],
                }
            )
        return out


def factorize(coeffs: Union[GmaCoefficients, Sequence[Number]]) -> FactorData:
    g = coeffs if isinstance(coeffs, GmaCoefficients) else GmaCoefficients(coeffs)
    roots, facts = [], []
    for p in range(1, g.n):
        Q = q_polynomial(p, g)
        r = isolate_largest_nonneg_root(Q.dehomogenize())
        if r is None:  # pragma: no cover
            raise ArithmeticError(f"Q_{p}(x, 1) has no nonnegative root")
        roots.append(r)
        facts.append(divide_out_linear(Q, r))
    for p in range(1, len(roots)):
        s = compare_roots(roots[p - 1], roots[p])
        if s > 0 or (s == 0 and roots[p].compare(0) > 0):
            raise ArithmeticError(f"factor roots not increasing at p={p}")
    return FactorData(tuple(roots), tuple(facts))


def gma_test(m: ManifoldPresentation, alpha, beta, coeffs: Union[GmaCoefficients, Sequence[Number]], v: SubvarietyCandidate) -> Fraction:
    """``int_V Q_p(alpha, beta)`` for ``p = dim V``; destabilizing iff ``<= 0``."""
    g = coeffs if isinstance(coeffs, GmaCoefficients) else GmaCoefficients(coeffs)
    if g.n != m.dim:
        raise ArityError(f"{len(g.c)} coefficients for a manifold of dimension {m.dim}")
    if not 1 <= v.dim <= m.dim - 1:
        raise ArityError(f"candidate {v.name} has dimension {v.dim}")
    Q = q_polynomial(v.dim, g)
    pair = power_pairings(v, alpha, beta)
    return sum((c * pair[i] for i, c in enumerate(Q.coeffs)), Fraction(0))


def tau_cone_verdict(m: ManifoldPresentation, kind: str, alpha, beta, r: RootHandle, p: Union[int, None] = None) -> Verdict:
    """Exact cone verdict for ``alpha - r * beta``.

    Each form gives ``l(alpha) - r l(beta) = l(beta) * (q - r)`` with
    ``q = l(alpha)/l(beta)``, so its sign is decided by comparing the root
    handle with the rational ``q``.
    """
    desc = _description(m, kind, p)
    signs = []
    for ineq in desc.inequalities:
        la, lb = ineq.value(tuple(alpha)), ineq.value(tuple(beta))
        if lb == 0:
            signs.append((la > 0) - (la < 0))
        else:
            sb = 1 if lb > 0 else -1
            signs.append(-sb * r.compare(la / lb))
    if any(s < 0 for s in signs):
        return Verdict.OUTSIDE
    if any(s == 0 for s in signs):
        return Verdict.BOUNDARY
    return Verdict.INSIDE


class GmaStatus(str, enum.Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class GmaVerdict:
    status: GmaStatus
    coeffs: GmaCoefficients
    tests: tuple  # (name, dim, value)
    dest: tuple
    factors: FactorData
    tau_verdicts: tuple  # (p, verdict or None)
    completeness: str

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "coeffs": self.coeffs.to_json(),
            "candidates": [{"name": n, "dim": d, "value": format_rational(v)} for n, d, v in self.tests],
            "dest": list(self.dest),
            "factors": self.factors.to_json() if self.factors else None,
            "tau_cone_verdicts": [
                {"p": p, "cone": f"modified:{p + 1}", "verdict": v.value if v else "missing-cone-data"}
                for p, v in self.tau_verdicts
            ],
            "completeness": self.completeness,
        }


def classify_gma(
    m: ManifoldPresentation,
    alpha,
    beta,
    coeffs: Union[GmaCoefficients, Sequence[Number]],
    with_factors: bool = True,
) -> GmaVerdict:
    """Verdict over the candidate list; factor roots and their cone verdicts unless ``with_factors`` is off."""
    g = coeffs if isinstance(coeffs, GmaCoefficients) else GmaCoefficients(coeffs)
    if g.c_n is None:
        g = solve_top_constant(m, alpha, beta, g)
    tests = tuple((v.name, v.dim, gma_test(m, alpha, beta, g, v)) for v in m.candidates)
    dest = tuple(name for name, _, val in tests if val <= 0)
    if any(val < 0 for _, _, val in tests):
        status = GmaStatus.UNSTABLE
    elif dest:
        status = GmaStatus.SEMISTABLE
    else:
        status = GmaStatus.STABLE
    if not with_factors:
        return GmaVerdict(status, g, tests, dest, None, (), m.completeness(alpha, beta, "gma"))
    fd = factorize(g)
    verdicts = []
    for p in range(1, m.dim):
        try:
            v = tau_cone_verdict(m, "modified", alpha, beta, fd.root(p), p + 1)
        except MissingConeDataError:
            v = None
        verdicts.append((p, v))
    return GmaVerdict(status, g, tests, dest, fd, tuple(verdicts), m.completeness(alpha, beta, "gma"))


@dataclass(frozen=True)
class InverseHessian:
    k: int
    kappa: Fraction
    coeffs: GmaCoefficients
    kappa_p: tuple  # (p, kappa_p) for p >= k
    factors: FactorData

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "kappa": format_rational(self.kappa),
            "coeffs": self.coeffs.to_json(),
            "kappa_p": [{"p": p, "kappa_p": format_rational(q)} for p, q in self.kappa_p],
            "factors": self.factors.to_json(),
        }


def inverse_hessian(m: ManifoldPresentation, alpha, beta, k: int) -> InverseHessian:
    """Coefficients for ``Theta = kappa * theta^k``, ``kappa`` fixed by the cohomological constraint.

    ``kappa = (n-k)! int alpha^n / (n! int beta^k alpha^(n-k))``; for ``p >= k``
    the root is ``r_p = kappa_p^(1/k)`` with ``kappa_p = p! kappa / (p-k)!``.
    """
    n = m.dim
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range 1..{n - 1}")
    pair = power_pairings(m, alpha, beta)
    if pair[n - k] == 0 or pair[n] == 0:
        raise ValueError("degenerate intersection numbers for the inverse Hessian normalization")
    kappa = Fraction(factorial(n - k)) * pair[n] / (factorial(n) * pair[n - k])
    c = [Fraction(0)] * (n - 1)
    c[k - 1] = kappa
    g = solve_top_constant(m, alpha, beta, c)
    kp = tuple((p, factorial(p) * kappa / factorial(p - k)) for p in range(k, n))
    return InverseHessian(k, kappa, g, kp, factorize(g))


@dataclass(frozen=True)
class ZDatum:
    b: tuple
    all_negative: bool
    exact: bool

    def to_json(self) -> dict:
        vals = [format_rational(x) if self.exact else float(x) for x in self.b]
        return {"b": vals, "all_negative": self.all_negative, "exact": self.exact}


def _as_pair(z) -> tuple:
    if isinstance(z, complex):
        return z.real, z.imag
    if isinstance(z, (int, float, Fraction)):
        return z, 0
    re, im = z
    return re, im


def from_z_datum(Z, rho: Sequence) -> ZDatum:
    """``b_k = Im(conj(Z) rho_k) / Im(conj(Z) rho_0)`` for ``k >= 1``, signs untouched.

    Complex inputs are Python complex numbers (float path) or ``(re, im)``
    pairs of rationals (exact path).
    """
    zs = [_as_pair(Z)] + [_as_pair(r) for r in rho]
    exact = all(isinstance(x, (int, Fraction)) for pair in zs for x in pair)
    conv = Fraction if exact else float
    (zr, zi), rest = (tuple(conv(x) for x in zs[0])), [tuple(conv(x) for x in r) for r in zs[1:]]
    if not rest:
        raise ValueError("rho must contain rho_0")

    def im_conj(w):
        return zr * w[1] - zi * w[0]

    den = im_conj(rest[0])
    if den == 0:
        raise ZeroDivisionError("Im(conj(Z) * rho_0) vanishes")
    b = tuple(im_conj(w) / den for w in rest[1:])
    return ZDatum(b, all(x < 0 for x in b), exact)

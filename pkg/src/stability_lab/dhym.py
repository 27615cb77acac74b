"""Supercritical dHYM: central charge, complementary lifted angle and the Nakai-type test.

Intersection numbers stay exact; only ``arg`` and ``cot`` are floats.  Every
sign decision closer than ``eps`` to zero is reported as marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

from .arith import format_rational
from .cones import MissingConeDataError, Verdict, in_cone, in_cone_float
from .geometry import ManifoldPresentation, SubvarietyCandidate, power_pairings

__all__ = [
    "DEFAULT_EPS",
    "SupercriticalError",
    "DhymAngle",
    "DhymFactorClass",
    "DhymTest",
    "DhymHypotheses",
    "central_charge",
    "complementary_lifted_angle",
    "cot",
    "product_coefficients",
    "direct_coefficients",
    "dhym_factor_classes",
    "dhym_test",
    "dhym_hypothesis_check",
]

DEFAULT_EPS = 1e-9


class SupercriticalError(ValueError):
    """No branch of the lifted angle lies in (0, pi)."""


def cot(theta: float) -> Union[float, Fraction]:
    """Cotangent, exact at multiples of pi/4 (0 and +-1) and a float elsewhere."""
    q = theta / (math.pi / 4)
    k = round(q)
    if abs(q - k) < 1e-12:
        r = k % 4
        if r == 0:
            raise ZeroDivisionError("cot is undefined at multiples of pi")
        return Fraction((0, 1, 0, -1)[r])
    return math.cos(theta) / math.sin(theta)


def _pairings_by_beta_power(obj, alpha, beta) -> tuple:
    """``I[k] = int alpha^(p-k) beta^k``."""
    pair = power_pairings(obj, alpha, beta)  # pair[i] = alpha^i beta^(p-i)
    return tuple(reversed(pair))


def central_charge(m: ManifoldPresentation, alpha, beta) -> tuple[Fraction, Fraction]:
    """Exact ``(Re, Im)`` of ``int (beta + i alpha)^n``."""
    n = m.dim
    pair = power_pairings(m, alpha, beta)  # alpha^k beta^(n-k)
    re = im = Fraction(0)
    for k in range(n + 1):
        term = comb(n, k) * pair[k]
        unit = k % 4  # i^k
        if unit == 0:
            re += term
        elif unit == 1:
            im += term
        elif unit == 2:
            re -= term
        else:
            im -= term
    if re == 0 and im == 0:
        raise ValueError("central charge vanishes: the half-plane assumption fails")
    return re, im


@dataclass(frozen=True)
class DhymAngle:
    n: int
    z_exact: tuple
    phi_hat: float
    marginal: bool

    @property
    def z(self) -> complex:
        return complex(float(self.z_exact[0]), float(self.z_exact[1]))

    def to_json(self) -> dict:
        return {
            "Z": {"re": format_rational(self.z_exact[0]), "im": format_rational(self.z_exact[1])},
            "Z_float": [self.z.real, self.z.imag],
            "phi_hat": self.phi_hat,
            "marginal": self.marginal,
        }


def complementary_lifted_angle(Z, n: int, eps: float = DEFAULT_EPS) -> DhymAngle:
    """The representative of ``n*pi/2 - arg Z`` (mod 2 pi) lying in (0, pi)."""
    if isinstance(Z, complex):
        z_exact = (Fraction(Z.real), Fraction(Z.imag))
    else:
        z_exact = (Fraction(Z[0]), Fraction(Z[1]))
    if z_exact == (0, 0):
        raise ValueError("Z = 0")
    arg = math.atan2(float(z_exact[1]), float(z_exact[0]))
    phi = math.fmod(n * math.pi / 2 - arg, 2 * math.pi)
    if phi < 0:
        phi += 2 * math.pi
    marginal = any(abs(phi - e) < eps for e in (0.0, math.pi / 2, math.pi, 2 * math.pi))
    if not 0 < phi < math.pi:
        raise SupercriticalError(f"n*pi/2 - arg Z = {phi:.12g} (mod 2 pi) is not in (0, pi)")
    return DhymAngle(n, z_exact, phi, marginal)


def _poly_mul_linear(coeffs: list, c) -> list:
    """Multiply ``sum coeffs[k] x^(d-k) y^k`` by ``x - c y``."""
    out = [0] * (len(coeffs) + 1)
    for k, a in enumerate(coeffs):
        out[k] += a
        out[k + 1] -= c * a
    return out


def product_coefficients(phi_hat: float, p: int) -> list:
    """Coefficients (by power of y) of ``prod_l (x - cot((phi+l pi)/p) y)``."""
    coeffs: list = [Fraction(1)]
    for l in range(p):
        coeffs = _poly_mul_linear(coeffs, cot((phi_hat + l * math.pi) / p))
    return coeffs


def direct_coefficients(phi_hat: float, p: int) -> list:
    """Coefficients (by power of y) of ``Re(x+iy)^p - cot(phi) Im(x+iy)^p``."""
    ct = cot(phi_hat)
    out = []
    for k in range(p + 1):
        sign = (1, 1, -1, -1)[k % 4]
        if k % 2 == 0:
            out.append(sign * comb(p, k) * Fraction(1))
        else:
            out.append(-ct * sign * comb(p, k))
    return out


@dataclass(frozen=True)
class DhymFactorClass:
    p: int
    cot: float
    coords: tuple
    verdict: Union[Verdict, None]
    marginal: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "cot": float(self.cot),
            "class": [float(x) for x in self.coords],
            "cone": f"modified:{self.p + 1}",
            "verdict": self.verdict.value if self.verdict else "missing-cone-data",
            "marginal": self.marginal,
        }


def dhym_factor_classes(m: ManifoldPresentation, alpha, beta, phi_hat: float, eps: float = DEFAULT_EPS) -> list[DhymFactorClass]:
    """``tau_p = alpha - cot(phi/p) beta`` for ``p = 1..n-1`` with (p+1)-modified cone verdicts."""
    out = []
    for p in range(1, m.dim):
        c = cot(phi_hat / p)
        if isinstance(c, Fraction):
            coords = tuple(Fraction(a) - c * Fraction(b) for a, b in zip(alpha, beta))
        else:
            coords = tuple(float(a) - c * float(b) for a, b in zip(alpha, beta))
        try:
            if isinstance(c, Fraction):
                v, marginal = in_cone(m, "modified", coords, p + 1), False
            else:
                v, marginal = in_cone_float(m, "modified", coords, p + 1, eps)
        except MissingConeDataError:
            v, marginal = None, False
        out.append(DhymFactorClass(p, c, coords, v, marginal))
    return out


@dataclass(frozen=True)
class DhymTest:
    name: str
    p: int
    value: float
    product_value: float
    rel_error: float
    exact: Union[Fraction, None]
    marginal: bool

    @property
    def destabilizing(self) -> bool:
        return self.value <= 0 or self.marginal

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "p": self.p,
            "value": self.value,
            "product_value": self.product_value,
            "rel_error": self.rel_error,
            "marginal": self.marginal,
        }
        if self.exact is not None:
            out["exact"] = format_rational(self.exact)
        return out


def dhym_test(m: ManifoldPresentation, alpha, beta, phi_hat: float, v: SubvarietyCandidate, eps: float = DEFAULT_EPS) -> DhymTest:
    """``int_V Re(a+ib)^p - cot(phi) Im(a+ib)^p`` evaluated directly and through the product form."""
    p = v.dim
    I = _pairings_by_beta_power(v, alpha, beta)
    direct = direct_coefficients(phi_hat, p)
    prod = product_coefficients(phi_hat, p)
    terms = [c * x for c, x in zip(direct, I)]
    exact = sum(terms, Fraction(0)) if all(isinstance(t, Fraction) for t in terms) else None
    value = float(exact) if exact is not None else math.fsum(float(t) for t in terms)
    product_value = math.fsum(float(c) * float(x) for c, x in zip(prod, I))
    scale = math.fsum(abs(float(t)) for t in terms) or 1.0
    rel = abs(value - product_value) / scale
    marginal = exact is None and abs(value) < eps * scale
    return DhymTest(v.name, p, value, product_value, rel, exact, marginal)


@dataclass(frozen=True)
class DhymHypotheses:
    window_ok: bool
    covered_by_theorem: bool
    alpha_kahler: Union[bool, None]
    factor_classes: tuple
    tau2_big: Union[Verdict, None]
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "window_ok": self.window_ok,
            "covered_by_theorem": self.covered_by_theorem,
            "alpha_kahler": self.alpha_kahler,
            "factor_classes": [f.to_json() for f in self.factor_classes],
            "tau2_big": self.tau2_big.value if self.tau2_big else None,
            "failures": list(self.failures),
        }


def dhym_hypothesis_check(m: ManifoldPresentation, alpha, beta, phi_hat: float, eps: float = DEFAULT_EPS) -> DhymHypotheses:
    """Angle window by dimension, factor-class cone membership and (for n=3) bigness of tau_2."""
    n = m.dim
    failures = []
    if not 0 < phi_hat < math.pi:
        failures.append("phi_hat outside (0, pi)")
    window_ok = True
    if n == 4 and not math.pi / 2 < phi_hat < math.pi:
        window_ok = False
        failures.append("dimension 4 needs phi_hat in (pi/2, pi)")
    covered = n <= 4
    if not covered:
        failures.append("dimension > 4 is not covered by the finiteness theorem")
    classes = tuple(dhym_factor_classes(m, alpha, beta, phi_hat, eps))
    for f in classes:
        if f.verdict is None:
            failures.append(f"tau_{f.p}: missing cone data for modified:{f.p + 1}")
        elif f.verdict is not Verdict.INSIDE:
            failures.append(f"tau_{f.p} not inside modified:{f.p + 1}")
        elif f.marginal:
            failures.append(f"tau_{f.p}: marginal cone verdict")
    try:
        alpha_kahler = in_cone(m, "kahler", alpha) is Verdict.INSIDE
    except MissingConeDataError:
        alpha_kahler = None
    tau2 = None
    if n == 3:
        try:
            c = classes[1]
            tau2 = in_cone(m, "big", c.coords) if isinstance(c.cot, Fraction) else in_cone_float(m, "big", c.coords, eps=eps)[0]
        except MissingConeDataError:
            tau2 = None
        if not alpha_kahler:
            failures.append("three-fold theorem needs alpha Kähler")
    return DhymHypotheses(window_ok, covered, alpha_kahler, classes, tau2, tuple(failures))

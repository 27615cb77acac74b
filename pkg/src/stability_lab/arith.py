"""Exact rational arithmetic, small polynomials and certified root handling.

Everything here works over :class:`fractions.Fraction`.  Polynomials are tiny
(degree at most the ambient dimension), so clarity wins over asymptotics.

The central object is :class:`RootHandle`: a real root of a rational
polynomial, stored either exactly (a rational or a quadratic surd) or as an
isolating interval with rational endpoints that can be refined on demand.
Comparisons against rationals never touch floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

__all__ = [
    "RationalFormatError",
    "NonFactorizableError",
    "parse_rational",
    "format_rational",
    "UniPoly",
    "BiHomogPoly",
    "QuadraticSurd",
    "RootHandle",
    "RootValue",
    "RootSide",
    "LinearFactorization",
    "isolate_largest_nonneg_root",
    "isolate_positive_roots",
    "sign_relative_to_root",
    "divide_out_linear",
    "compare_roots",
]


class RationalFormatError(ValueError):
    """A string could not be read as an exact rational."""


class NonFactorizableError(ArithmeticError):
    """A quotient coefficient came out negative where it must be >= 0."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Read ``"p/q"`` (or an integer / terminating decimal) exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise RationalFormatError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalFormatError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise RationalFormatError(f"not a rational: {text!r}") from exc


def format_rational(q: Number) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniPoly:
    """Polynomial with rational coefficients, ascending degree."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [c if type(c) is Fraction else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    @cached_property
    def _scaled(self) -> tuple[tuple, int]:
        """Integer numerators over a common denominator: ``coeffs[i] = ints[i] / den``."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(c.numerator * (den // c.denominator) for c in self.coeffs), den

    def __call__(self, x):
        if not isinstance(x, (int, Fraction)):
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        if not self.coeffs:
            return Fraction(0)
        ints, den = self._scaled
        p, q = x.numerator, x.denominator
        acc, qp = ints[-1], 1
        for a in reversed(ints[:-1]):
            qp *= q
            acc = acc * p + a * qp
        return Fraction(acc, den * qp)

    @cached_property
    def _floats(self) -> tuple:
        return tuple(float(c) for c in reversed(self.coeffs))

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in self._floats:
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quot), UniPoly(rem[: other.degree])

    def monic(self) -> "UniPoly":
        return self * (1 / self.lead) if self.coeffs else self

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def squarefree(self) -> "UniPoly":
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].monic() if g.degree > 0 else self.monic()

    def strip_zero_roots(self) -> tuple["UniPoly", int]:
        """Return ``(g, k)`` with ``self == x**k * g`` and ``g(0) != 0``."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return UniPoly(self.coeffs[k:]), k

    def shift(self, c: Number) -> "UniPoly":
        """``p(x + c)`` by repeated synthetic division."""
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += c * cs[j + 1]
        return UniPoly(cs)

    def scale(self, s: Number) -> "UniPoly":
        """``p(s * x)``."""
        return UniPoly(c * Fraction(s) ** i for i, c in enumerate(self.coeffs))

    def reverse(self) -> "UniPoly":
        return UniPoly(reversed(self.coeffs))

    def sign_variations(self) -> int:
        signs = [_sign(c) for c in self.coeffs if c]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def integer_primitive(self) -> list[int]:
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return [v // g for v in ints] if g else ints

    def cauchy_bound(self) -> Fraction:
        lead = abs(self.lead)
        return 1 + max((abs(c) / lead for c in self.coeffs[:-1]), default=Fraction(0))

    def eval_interval(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Enclosure of ``{p(x) : lo <= x <= hi}`` by interval Horner."""
        if not self.coeffs:
            return Fraction(0), Fraction(0)
        lo, hi = Fraction(lo), Fraction(hi)
        ints, den = self._scaled
        q = lo.denominator * hi.denominator // math.gcd(lo.denominator, hi.denominator)
        P, R = lo.numerator * (q // lo.denominator), hi.numerator * (q // hi.denominator)
        a = b = ints[-1]
        qp = 1
        for c in reversed(ints[:-1]):
            qp *= q
            prods = (a * P, a * R, b * P, b * R)
            a, b = min(prods) + c * qp, max(prods) + c * qp
        return Fraction(a, den * qp), Fraction(b, den * qp)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{format_rational(c)}" + ("" if i == 0 else "*x" if i == 1 else f"*x^{i}"))
        return " + ".join(reversed(terms))


# ---------------------------------------------------------------------------
# Quadratic surds
# ---------------------------------------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = s**2 * r`` with ``r`` free of small square factors."""
    s = 1
    p = 2
    while p * p <= n and p < 5000:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        p += 1
    root = math.isqrt(n)
    if root * root == n:
        return s * root, 1
    return s, n


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number ``a + b*sqrt(d)`` with rational ``a, b`` and integer ``d > 1``."""

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def sqrt(q: Number) -> Union[Fraction, "QuadraticSurd"]:
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        num = q.numerator * q.denominator
        s, r = _squarefree_split(num)
        coef = Fraction(s, q.denominator)
        if r == 1:
            return coef
        return QuadraticSurd(Fraction(0), coef, r)

    def _lift(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError("surds with different radicands")
            return other
        return QuadraticSurd(Fraction(other), Fraction(0), self.d)

    @staticmethod
    def _make(a, b, d):
        return Fraction(a) if b == 0 else QuadraticSurd(Fraction(a), Fraction(b), d)

    def __add__(self, other):
        o = self._lift(other)
        return self._make(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return self._make(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "d": self.d}

    def __str__(self) -> str:
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.d})"


def _exact_sign(x) -> int:
    return x.sign() if isinstance(x, QuadraticSurd) else _sign(x)


# ---------------------------------------------------------------------------
# Root handles
# ---------------------------------------------------------------------------


class RootSide(str, enum.Enum):
    BELOW = "below"
    AT = "at"
    ABOVE = "above"


@dataclass(frozen=True)
class RootHandle:
    """A real root of ``poly`` isolated in the closed interval ``[lo, hi]``.

    ``poly`` has exactly one root in ``[lo, hi]``.  When ``exact`` is None the
    root is simple and ``poly`` changes sign strictly between the endpoints,
    neither of which is a root.
    """

    poly: UniPoly
    lo: Fraction
    hi: Fraction
    exact: Union[Fraction, QuadraticSurd, None] = None

    @classmethod
    def rational(cls, q: Number) -> "RootHandle":
        q = Fraction(q)
        return cls(UniPoly([-q, 1]), q, q, q)

    @classmethod
    def from_surd(cls, poly: UniPoly, value: QuadraticSurd) -> "RootHandle":
        approx = Fraction(float(value))
        delta = max(abs(approx), Fraction(1)) * Fraction(1, 2**40)
        lo, hi = approx - delta, approx + delta
        while _exact_sign(value - lo) <= 0 or _exact_sign(value - hi) >= 0:
            delta *= 2
            lo, hi = approx - delta, approx + delta
        return cls(poly, lo, hi, value)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def is_rational(self) -> bool:
        return isinstance(self.exact, Fraction)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        r = self.refine(max(abs(self.hi), Fraction(1)) * Fraction(1, 2**60))
        return float((r.lo + r.hi) / 2)

    def refine(self, width: Number) -> "RootHandle":
        """Bisect until the interval is narrower than ``width``."""
        width = Fraction(width)
        if self.is_rational or self.width < width:
            return self
        lo, hi = self.lo, self.hi
        if self.exact is not None:
            value = self.exact
            while hi - lo >= width:
                mid = (lo + hi) / 2
                if _exact_sign(value - mid) > 0:
                    lo = mid
                else:
                    hi = mid
            return RootHandle(self.poly, lo, hi, value)
        s_hi = _sign(self.poly(hi))
        while hi - lo >= width:
            mid = (lo + hi) / 2
            v = self.poly(mid)
            if v == 0:
                return RootHandle.rational(mid)
            if _sign(v) == s_hi:
                hi = mid
            else:
                lo = mid
        return RootHandle(self.poly, lo, hi, None)

    def compare(self, q: Number) -> int:
        """Exact ``sign(root - q)``."""
        q = Fraction(q)
        if self.exact is not None:
            return _exact_sign(self.exact - q)
        if q < self.lo:
            return 1
        if q > self.hi:
            return -1
        v = self.poly(q)
        if v == 0:
            return 0
        return -1 if _sign(v) == _sign(self.poly(self.hi)) else 1

    def to_json(self) -> dict:
        out = {
            "poly": self.poly.to_json(),
            "interval": [format_rational(self.lo), format_rational(self.hi)],
        }
        if isinstance(self.exact, Fraction):
            out["exact"] = format_rational(self.exact)
        elif isinstance(self.exact, QuadraticSurd):
            out["exact"] = self.exact.to_json()
        return out

    def __str__(self) -> str:
        if self.exact is not None:
            return format_rational(self.exact) if isinstance(self.exact, Fraction) else str(self.exact)
        return f"root of ({self.poly}) in [{format_rational(self.lo)}, {format_rational(self.hi)}]"


def compare_roots(a: RootHandle, b: RootHandle, max_steps: int = 400) -> int:
    """Exact ``sign(a - b)`` for two root handles."""
    if a.is_rational:
        return -b.compare(a.exact)
    if b.is_rational:
        return a.compare(b.exact)
    if isinstance(a.exact, QuadraticSurd) and isinstance(b.exact, QuadraticSurd) and a.exact.d == b.exact.d:
        return _exact_sign(a.exact - b.exact)
    g = None
    for _ in range(max_steps):
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        if g is None:
            g = a.poly.gcd(b.poly)
        if g.degree > 0 and a.lo < b.lo and b.hi < a.hi:
            gl, gh = g(b.lo), g(b.hi)
            if gl == 0 or gh == 0 or _sign(gl) != _sign(gh):
                return 0
        if g.degree > 0 and b.lo < a.lo and a.hi < b.hi:
            gl, gh = g(a.lo), g(a.hi)
            if gl == 0 or gh == 0 or _sign(gl) != _sign(gh):
                return 0
        a = a.refine(a.width / 2)
        b = b.refine(b.width / 4)
        if a.is_rational or b.is_rational:
            return compare_roots(a, b)
    raise ArithmeticError("root comparison did not terminate")


# ---------------------------------------------------------------------------
# Root isolation
# ---------------------------------------------------------------------------


def _interval_variations(p: UniPoly, a: Fraction, b: Fraction) -> int:
    """Descartes bound for the number of roots of ``p`` in ``(a, b)``."""
    q = p.shift(a).scale(b - a)
    return q.reverse().shift(1).sign_variations()


def isolate_positive_roots(h: UniPoly) -> list[RootHandle]:
    """All strictly positive real roots of ``h``, ascending, by Descartes bisection."""
    g, _ = h.strip_zero_roots()
    if g.degree < 1:
        return []
    g = g.squarefree()
    out: list[RootHandle] = []
    stack = [(Fraction(0), g.cauchy_bound() + 1)]
    while stack:
        a, b = stack.pop()
        v = _interval_variations(g, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append(RootHandle(g, a, b, None))
            continue
        m = (a + b) / 2
        if g(m) == 0:
            out.append(RootHandle.rational(m))
        stack.append((a, m))
        stack.append((m, b))
    # endpoints of an isolating interval may themselves be roots only at
    # bisection midpoints, which were recorded exactly; drop such duplicates
    fixed = []
    for r in out:
        if r.exact is None and (g(r.lo) == 0 or g(r.hi) == 0):
            continue
        fixed.append(r)
    return sorted(fixed, key=lambda r: r.lo)


def _has_single_sign_change(g: UniPoly) -> bool:
    return g.lead > 0 and g.coeffs[0] < 0 and all(c <= 0 for c in g.coeffs[:-1])


def _float_bracket(g: UniPoly) -> Union[RootHandle, None]:
    """Unique positive root of ``g`` (leading +, rest <= 0, g(0) < 0) via a float seed."""
    lo_f, hi_f = 0.0, float(g.cauchy_bound()) + 1.0
    for _ in range(200):
        mid = 0.5 * (lo_f + hi_f)
        if mid in (lo_f, hi_f):
            break
        if g.eval_float(mid) < 0:
            lo_f = mid
        else:
            hi_f = mid
    x = 0.5 * (lo_f + hi_f)
    delta = max(abs(x), 1.0) * 2.0**-44
    for _ in range(8):
        lo, hi = Fraction(max(x - delta, 0.0)), Fraction(x + delta)
        vlo, vhi = g(lo), g(hi)
        if vlo < 0 < vhi:
            return RootHandle(g, lo, hi, None)
        if vlo == 0:
            return RootHandle.rational(lo)
        if vhi == 0:
            return RootHandle.rational(hi)
        delta *= 16
    return None


def _bisect_bracket(g: UniPoly) -> RootHandle:
    lo, hi = Fraction(0), g.cauchy_bound() + 1
    while hi - lo > max(hi, Fraction(1)) * Fraction(1, 2**44):
        mid = (lo + hi) / 2
        v = g(mid)
        if v == 0:
            return RootHandle.rational(mid)
        if v < 0:
            lo = mid
        else:
            hi = mid
    return RootHandle(g, lo, hi, None)


def _try_rational(handle: RootHandle) -> RootHandle:
    """Promote an interval root to an exact rational when the root is rational.

    Any rational root ``p/q`` of the primitive integer polynomial has ``q``
    dividing the leading coefficient; a best approximation with that
    denominator bound is the only candidate worth an exact evaluation.
    """
    if handle.exact is not None:
        return handle
    lead = abs(handle.poly.integer_primitive()[-1])
    bound = min(lead, 10**7)
    mid = (handle.lo + handle.hi) / 2
    cand = Fraction(float(mid)).limit_denominator(bound)
    if handle.lo <= cand <= handle.hi and handle.poly(cand) == 0:
        return RootHandle.rational(cand)
    return handle


def _quadratic_roots(g: UniPoly) -> list[Union[Fraction, QuadraticSurd]]:
    c, b, a = g.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = QuadraticSurd.sqrt(disc)
    r1 = (-b + s) * (1 / (2 * a)) if isinstance(s, QuadraticSurd) else (-b + s) / (2 * a)
    r2 = (-b - s) * (1 / (2 * a)) if isinstance(s, QuadraticSurd) else (-b - s) / (2 * a)
    return [r1, r2]


def isolate_largest_nonneg_root(h: UniPoly) -> Union[RootHandle, None]:
    """Largest real root ``>= 0`` of ``h``, or None when there is none.

    Degree <= 2 (after removing the factor ``x**k``) gives exact rational or
    surd roots.  Otherwise the root is an isolating interval; a polynomial with
    a single coefficient sign change is bracketed directly from a float seed
    and the bracket is checked exactly, anything else goes through Descartes
    bisection.
    """
    if h.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    g, k = h.strip_zero_roots()
    best: Union[RootHandle, None] = None
    if g.degree == 1:
        r = -g.coeffs[0] / g.coeffs[1]
        if r > 0:
            best = RootHandle.rational(r)
    elif g.degree == 2:
        pos = [r for r in _quadratic_roots(g) if _exact_sign(r) > 0]
        if pos:
            top = pos[0] if len(pos) == 1 or _exact_sign(pos[0] - pos[1]) >= 0 else pos[1]
            best = RootHandle.rational(top) if isinstance(top, Fraction) else RootHandle.from_surd(g.monic(), top)
    elif g.degree >= 3:
        gm = g.monic()
        if _has_single_sign_change(gm):
            best = _float_bracket(gm) or _bisect_bracket(gm)
        else:
            roots = isolate_positive_roots(gm)
            if roots:
                best = max(roots, key=lambda r: r.hi)
                for r in roots:
                    if r is not best and compare_roots(r, best) > 0:
                        best = r
        if best is not None:
            best = _try_rational(best)
    if best is None and k > 0:
        best = RootHandle.rational(0)
    return best


def _check_descartes_pattern(h: UniPoly) -> None:
    cs = h.coeffs
    if not cs or cs[-1] <= 0 or any(c > 0 for c in cs[:-1]):
        raise ValueError(
            "polynomial must have a positive leading coefficient and all other coefficients <= 0"
        )


def sign_relative_to_root(h: UniPoly, q: Number) -> RootSide:
    """Place ``q >= 0`` relative to the unique nonnegative root of ``h``.

    ``h`` must have a positive leading coefficient and all other coefficients
    nonpositive, so by Descartes it has exactly one positive root (or only the
    root 0 when it is a monomial).  Then ``sign(h(q))`` decides the comparison
    with no approximation at all.
    """
    _check_descartes_pattern(h)
    q = Fraction(q)
    if q < 0:
        raise ValueError("q must be nonnegative")
    v = h(q)
    if v > 0:
        return RootSide.ABOVE
    if v < 0:
        return RootSide.BELOW
    return RootSide.AT


# ---------------------------------------------------------------------------
# Values depending on a root, bihomogeneous polynomials, linear factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootValue:
    """``expr(r)`` for a rational polynomial ``expr`` and a root handle ``r``."""

    expr: UniPoly
    root: RootHandle

    def exact(self):
        if self.root.exact is None:
            return None
        val = self.root.exact
        if isinstance(val, Fraction):
            return self.expr(val)
        # Horner on pairs u + w*sqrt(d)
        a, b, d = val.a, val.b, val.d
        u = w = Fraction(0)
        for c in reversed(self.expr.coeffs):
            u, w = u * a + w * b * d + c, u * b + w * a
        return QuadraticSurd._make(u, w, d)

    def enclosure(self, root: Union[RootHandle, None] = None) -> tuple[Fraction, Fraction]:
        r = root or self.root
        if r.is_rational:
            v = self.expr(r.exact)
            return v, v
        return self.expr.eval_interval(r.lo, r.hi)

    def sign(self, max_steps: int = 200) -> tuple[int, str]:
        """Certified sign and the method that certified it."""
        ex = self.exact()
        if ex is not None:
            return _exact_sign(ex), "exact"
        if self.expr.degree < 1:
            return _sign(self.expr(0)), "exact"
        r = self.root
        for step in range(max_steps):
            lo, hi = self.enclosure(r)
            if lo > 0:
                return 1, "interval"
            if hi < 0:
                return -1, "interval"
            if step == 4:
                g = self.expr.gcd(r.poly)
                if g.degree > 0:
                    gl, gh = g(r.lo), g(r.hi)
                    if gl == 0 or gh == 0 or _sign(gl) != _sign(gh):
                        return 0, "gcd"
            r = r.refine(r.width / 2)
            if r.is_rational:
                return _sign(self.expr(r.exact)), "exact"
        raise ArithmeticError("sign certification did not terminate")

    def __float__(self) -> float:
        ex = self.exact()
        if ex is not None:
            return float(ex)
        return self.expr.eval_float(float(self.root))

    def to_json(self) -> dict:
        ex = self.exact()
        if isinstance(ex, Fraction):
            return {"exact": format_rational(ex)}
        if isinstance(ex, QuadraticSurd):
            return {"exact": ex.to_json()}
        lo, hi = self.enclosure()
        return {"expr": self.expr.to_json(), "enclosure": [format_rational(lo), format_rational(hi)]}


@dataclass(frozen=True)
class BiHomogPoly:
    """Homogeneous ``sum_i coeffs[i] * x**i * y**(p - i)`` of degree ``p``."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_terms(cls, p: int, terms: dict) -> "BiHomogPoly":
        """From a map ``(i, p - i) -> coefficient``."""
        cs = [Fraction(0)] * (p + 1)
        for (i, j), c in terms.items():
            if i + j != p:
                raise ValueError(f"monomial x^{i} y^{j} is not of degree {p}")
            cs[i] += Fraction(c)
        return cls(tuple(cs))

    def terms(self) -> dict:
        p = self.degree
        return {(i, p - i): c for i, c in enumerate(self.coeffs)}

    def dehomogenize(self) -> UniPoly:
        """``Q(x, 1)``."""
        return UniPoly(self.coeffs)

    def derivative_x(self) -> "BiHomogPoly":
        return BiHomogPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def to_json(self) -> list:
        out = []
        for c in self.coeffs:
            if isinstance(c, (Fraction, int)):
                out.append(format_rational(c))
            elif hasattr(c, "to_json"):
                out.append(c.to_json())
            else:
                out.append(float(c))
        return out


@dataclass(frozen=True)
class CoefficientCertificate:
    index: int
    sign: int
    method: str


@dataclass(frozen=True)
class LinearFactorization:
    """``Q = (x - r y) * quotient`` with certified nonnegative quotient coefficients."""

    original: BiHomogPoly
    root: RootHandle
    quotient: BiHomogPoly
    certificate: tuple

    def reconstruction(self) -> list[RootValue]:
        """Coefficients of ``(x - r y) * quotient`` as values at the root."""
        q = [c.expr for c in self.quotient.coeffs]
        x = UniPoly([0, 1])
        out = [RootValue(-(x * q[0]), self.root)]
        for k in range(1, len(q) + 1):
            hi = q[k - 1]
            lo = x * q[k] if k < len(q) else UniPoly()
            out.append(RootValue(hi - lo, self.root))
        return out

    def residual(self, width: Number = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
        """Enclosure of ``h(r)``, the only coefficient not reconstructed identically.

        The root is refined until the enclosure is narrower than ``width``.
        """
        h = self.original.dehomogenize()
        r = self.root
        if r.is_exact:
            ex = RootValue(h, r).exact()
            return (Fraction(0), Fraction(0)) if _exact_sign(ex) == 0 else (ex, ex)
        width = Fraction(width)
        while True:
            lo, hi = h.eval_interval(r.lo, r.hi)
            if hi - lo < width:
                return lo, hi
            r = r.refine(r.width / 16)
            if r.is_rational:
                v = h(r.exact)
                return v, v


def divide_out_linear(Q: BiHomogPoly, r: RootHandle) -> LinearFactorization:
    """Factor ``Q(x, y) = (x - r*y) * Q~(x, y)`` for a root ``r`` of ``Q(x, 1)``.

    Quotient coefficients are polynomials in ``r`` (synthetic division) and are
    certified ``>= 0`` exactly when ``r`` is exact, by interval enclosure with
    refinement otherwise.  A negative coefficient raises NonFactorizableError.
    """
    a = [Fraction(c) for c in Q.coeffs]
    p = len(a) - 1
    if p < 1:
        raise ValueError("cannot divide a constant by a linear form")
    x = UniPoly([0, 1])
    exprs = [UniPoly()] * p
    exprs[p - 1] = UniPoly([a[p]])
    for j in range(p - 1, 0, -1):
        exprs[j - 1] = UniPoly([a[j]]) + x * exprs[j]
    if r.is_exact:
        rem = RootValue(UniPoly([a[0]]) + x * exprs[0], r).exact()
        if _exact_sign(rem) != 0:
            raise ValueError(f"{r} is not a root of Q(x, 1)")
    quotient = tuple(RootValue(e, r) for e in exprs)
    cert = []
    for i, v in enumerate(quotient):
        s, how = v.sign()
        if s < 0:
            raise NonFactorizableError(i, f"quotient coefficient of x^{i} is negative")
        cert.append(CoefficientCertificate(i, s, how))
    return LinearFactorization(Q, r, BiHomogPoly(quotient), tuple(cert))

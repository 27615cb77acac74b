"""Finite presentations of compact Kähler manifolds.

A presentation records a basis of (1,1)-classes, the top intersection form on
that basis (as a table of monomial values), cone descriptions and a finite list
of candidate subvarieties with their restricted intersection forms.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Sequence, Union

import jsonschema

from .arith import Number, format_rational, parse_rational
from .cones import ConeDescription, Inequality

__all__ = [
    "PresentationError",
    "SchemaError",
    "AsymmetricTensorError",
    "ArityError",
    "DegenerateCandidateError",
    "CohClass",
    "parse_class",
    "Condition",
    "CompleteRegion",
    "SubvarietyCandidate",
    "ManifoldPresentation",
    "intersect",
    "intersect_on",
    "power_pairings",
    "wu_bundle",
    "blowup_pn",
    "load_manifold",
    "save_manifold",
]


class PresentationError(ValueError):
    """Base class for invalid manifold data."""


class SchemaError(PresentationError):
    pass


class AsymmetricTensorError(PresentationError):
    pass


class ArityError(PresentationError):
    pass


class DegenerateCandidateError(PresentationError):
    pass


# ---------------------------------------------------------------------------
# Classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CohClass:
    """Coordinate vector of a (1,1)-class in a presentation's basis."""

    coords: tuple

    def __init__(self, coords: Iterable[Number]):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: "CohClass") -> "CohClass":
        _same_length(self, other)
        return CohClass(a + b for a, b in zip(self, other))

    def __sub__(self, other: "CohClass") -> "CohClass":
        _same_length(self, other)
        return CohClass(a - b for a, b in zip(self, other))

    def __neg__(self) -> "CohClass":
        return CohClass(-a for a in self)

    def __mul__(self, s: Number) -> "CohClass":
        s = Fraction(s)
        return CohClass(s * a for a in self)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> list[str]:
        return [format_rational(x) for x in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(x) for x in self.coords) + ")"


def _same_length(a, b) -> None:
    if len(a) != len(b):
        raise ArityError(f"class lengths differ: {len(a)} vs {len(b)}")


def parse_class(text: Union[str, Sequence]) -> CohClass:
    """``"1,1/5"`` or a sequence of rationals."""
    if isinstance(text, str):
        parts = [p.strip() for p in text.split(",")]
        if not text.strip() or any(not p for p in parts):
            raise ValueError(f"malformed class {text!r}")
        return CohClass(parse_rational(p) for p in parts)
    return CohClass(parse_rational(x) for x in text)


# ---------------------------------------------------------------------------
# Multilinear evaluation
# ---------------------------------------------------------------------------


def _expand(classes: Sequence, size: int) -> dict:
    """Monomial expansion of the product of the linear forms ``classes``."""
    poly = {(0,) * size: Fraction(1)}
    for c in classes:
        nxt: dict = defaultdict(Fraction)
        for e, v in poly.items():
            for j, x in enumerate(c):
                if x:
                    e2 = e[:j] + (e[j] + 1,) + e[j + 1 :]
                    nxt[e2] += v * x
        poly = nxt
    return poly


def _normalize_table(entries: Iterable[tuple[tuple, Fraction]]) -> tuple:
    return tuple(sorted((tuple(e), Fraction(v)) for e, v in entries if v != 0))


class _TensorData:
    dim: int
    tensor: tuple

    @cached_property
    def table(self) -> dict:
        return dict(self.tensor)

    def evaluate(self, classes: Sequence) -> Fraction:
        if len(classes) != self.dim:
            raise ArityError(f"expected {self.dim} classes, got {len(classes)}")
        size = self.basis_size
        for c in classes:
            if len(c) != size:
                raise ArityError(f"class of length {len(c)} for a basis of size {size}")
        t = self.table
        return sum((v * t.get(e, 0) for e, v in _expand(classes, size).items()), Fraction(0))

    @property
    def basis_size(self) -> int:
        if not self.tensor:
            return self._size
        return len(self.tensor[0][0])

    def alpha_data(self, alpha: tuple) -> tuple[Fraction, tuple]:
        """``(int alpha^d, w)`` with ``int alpha^(d-1) . beta = sum w[j] beta[j]``; memoized."""
        cache = self.__dict__.setdefault("_alpha_cache", {})
        key = tuple(alpha)
        hit = cache.get(key)
        if hit is None:
            size = self.basis_size
            if len(key) != size:
                raise ArityError(f"class of length {len(key)} for a basis of size {size}")
            t = self.table
            base = _expand([key] * (self.dim - 1), size)
            w = [Fraction(0)] * size
            for e, v in base.items():
                for j in range(size):
                    val = t.get(e[:j] + (e[j] + 1,) + e[j + 1 :])
                    if val:
                        w[j] += v * val
            top = sum((wj * a for wj, a in zip(w, key)), Fraction(0))
            hit = cache[key] = (top, tuple(w))
            if len(cache) > 4096:
                cache.clear()
        return hit


@dataclass(frozen=True, eq=True)
class SubvarietyCandidate(_TensorData):
    """A named subvariety of dimension ``dim`` with its restricted intersection form."""

    name: str
    dim: int
    tensor: tuple
    tags: tuple = ()
    _size: int = field(default=0, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "tensor": _tensor_json(self.tensor),
            "tags": list(self.tags),
        }


@dataclass(frozen=True)
class Condition:
    """``coeffs . x  rel  0`` with ``rel`` one of ``>``, ``>=``, ``==``."""

    coeffs: tuple
    rel: str

    def holds(self, coords: Sequence) -> bool:
        v = sum(Fraction(c) * x for c, x in zip(self.coeffs, coords))
        return {">": v > 0, ">=": v >= 0, "==": v == 0}[self.rel]

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self.coeffs], "rel": self.rel}

    @classmethod
    def from_json(cls, doc: dict) -> "Condition":
        return cls(tuple(parse_rational(c) for c in doc["coeffs"]), doc["rel"])


@dataclass(frozen=True)
class CompleteRegion:
    """Region of (alpha, beta) where the candidate list is asserted to contain every destabilizer."""

    statement: str
    alpha: tuple
    beta: tuple
    note: str = ""

    def covers(self, alpha, beta) -> bool:
        return all(c.holds(tuple(alpha)) for c in self.alpha) and all(c.holds(tuple(beta)) for c in self.beta)

    def to_json(self) -> dict:
        return {
            "statement": self.statement,
            "alpha": [c.to_json() for c in self.alpha],
            "beta": [c.to_json() for c in self.beta],
            "note": self.note,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CompleteRegion":
        return cls(
            doc["statement"],
            tuple(Condition.from_json(c) for c in doc["alpha"]),
            tuple(Condition.from_json(c) for c in doc["beta"]),
            doc.get("note", ""),
        )


@dataclass(frozen=True)
class ManifoldPresentation(_TensorData):
    name: str
    dim: int
    basis: tuple
    tensor: tuple
    cones: dict = field(default_factory=dict, hash=False)
    candidates: tuple = ()
    complete_regions: tuple = ()
    meta: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ArityError("dimension must be positive")
        size = len(self.basis)
        if len(set(self.basis)) != size:
            raise SchemaError("basis names must be distinct")
        for e, _ in self.tensor:
            _check_monomial(e, size, self.dim, self.name)
        names = set()
        for v in self.candidates:
            if v.name in names:
                raise SchemaError(f"duplicate candidate name {v.name!r}")
            names.add(v.name)
            if not 1 <= v.dim <= self.dim - 1:
                raise ArityError(f"candidate {v.name!r} has dimension {v.dim}, need 1..{self.dim - 1}")
            for e, _ in v.tensor:
                _check_monomial(e, size, v.dim, v.name)
            if not v.tensor:
                raise DegenerateCandidateError(f"candidate {v.name!r} has an identically zero intersection form")
            object.__setattr__(v, "_size", size)
        for key, desc in self.cones.items():
            if desc.key != key:
                raise SchemaError(f"cone stored under {key!r} describes {desc.key!r}")
            for q in desc.inequalities:
                if len(q.coeffs) != size:
                    raise ArityError(f"cone {key}: inequality of length {len(q.coeffs)}")

    @property
    def basis_size(self) -> int:
        return len(self.basis)

    def candidate(self, name: str) -> SubvarietyCandidate:
        for v in self.candidates:
            if v.name == name:
                return v
        raise KeyError(name)

    def with_candidates(self, candidates: Iterable[SubvarietyCandidate]) -> "ManifoldPresentation":
        return ManifoldPresentation(
            self.name, self.dim, self.basis, self.tensor, dict(self.cones), tuple(candidates),
            self.complete_regions, dict(self.meta),
        )

    def completeness(self, alpha, beta, statement: str = "j") -> str:
        for r in self.complete_regions:
            if r.statement == statement and r.covers(alpha, beta):
                return "certified"
        return "relative"

    def sha256(self) -> str:
        text = json.dumps(save_manifold(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ManifoldPresentation):
            return NotImplemented
        return save_manifold(self) == save_manifold(other)

    def __hash__(self) -> int:
        return hash((self.name, self.dim, self.basis, self.tensor))


def _check_monomial(e: tuple, size: int, degree: int, owner: str) -> None:
    if len(e) != size:
        raise ArityError(f"{owner}: monomial {list(e)} has {len(e)} exponents for a basis of size {size}")
    if any(k < 0 for k in e) or sum(e) != degree:
        raise ArityError(f"{owner}: monomial {list(e)} is not of degree {degree}")


def intersect(m: ManifoldPresentation, classes: Sequence) -> Fraction:
    """``int_X c_1 ... c_n`` by multilinear expansion of the tensor."""
    return m.evaluate(list(classes))


def intersect_on(v: SubvarietyCandidate, classes: Sequence) -> Fraction:
    """``int_V c_1 ... c_p`` for a candidate of dimension ``p``."""
    return v.evaluate(list(classes))


def power_pairings(obj: _TensorData, alpha, beta) -> tuple:
    """``(int alpha^i beta^(p-i))`` for ``i = 0..p`` on ``obj`` (manifold or candidate)."""
    p = obj.dim
    size = obj.basis_size
    t = obj.table
    a_pows = [{(0,) * size: Fraction(1)}]
    b_pows = [{(0,) * size: Fraction(1)}]
    for _ in range(p):
        a_pows.append(_expand([alpha], size) if len(a_pows) == 1 else _mul_linear(a_pows[-1], alpha))
        b_pows.append(_expand([beta], size) if len(b_pows) == 1 else _mul_linear(b_pows[-1], beta))
    out = []
    for i in range(p + 1):
        A, B = a_pows[i], b_pows[p - i]
        total = Fraction(0)
        for ea, va in A.items():
            for eb, vb in B.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                w = t.get(e)
                if w:
                    total += va * vb * w
        out.append(total)
    return tuple(out)


def _mul_linear(poly: dict, c) -> dict:
    nxt: dict = defaultdict(Fraction)
    for e, v in poly.items():
        for j, x in enumerate(c):
            if x:
                nxt[e[:j] + (e[j] + 1,) + e[j + 1 :]] += v * Fraction(x)
    return dict(nxt)


def _monomials(size: int, degree: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(size), degree):
        e = [0] * size
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    return out


def _divisor_restriction(table: dict, size: int, degree: int, divisor: Sequence) -> tuple:
    """Restricted form of a divisor class: ``e -> int_X D * x^e``."""
    entries = []
    for e in _monomials(size, degree):
        v = sum(
            (Fraction(d) * table.get(e[:j] + (e[j] + 1,) + e[j + 1 :], 0) for j, d in enumerate(divisor) if d),
            Fraction(0),
        )
        entries.append((e, v))
    return _normalize_table(entries)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------


def _wu_table(d: int, weights: Sequence[int]) -> tuple:
    """Basis (L, H); exponents are (e_L, e_H)."""
    n = len(weights) + 1
    return _normalize_table([((0, n), Fraction(d * sum(weights))), ((1, n - 1), Fraction(d))])


def wu_bundle(d: int, weights: Sequence[int]) -> ManifoldPresentation:
    """Projectivized split bundle ``P(O + L^-a_1 + ... + L^-a_{n-1})`` over a curve.

    ``L`` is the pullback of a degree ``d`` class on the base and ``H`` the
    tautological class.  ``weights`` must be strictly increasing positive integers.
    """
    weights = tuple(int(a) for a in weights)
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    d = int(d)
    if not weights:
        raise ValueError("need at least one weight (n >= 2)")
    if weights[0] < 1 or any(b <= a for a, b in zip(weights, weights[1:])):
        raise ValueError("weights must be strictly increasing positive integers")
    n = len(weights) + 1
    table = dict(_wu_table(d, weights))

    cands = [SubvarietyCandidate("C", 1, _wu_table(d, ()), ("section",))]
    for p in range(1, n - 1):
        name = "S" if p == 1 else f"V{p}"
        cands.append(SubvarietyCandidate(name, p + 1, _wu_table(d, weights[:p]), ("truncated-bundle",)))
    for i in range(1, n - 1):
        cls = (-weights[i - 1], 1)
        cands.append(SubvarietyCandidate(f"D{i}", n - 1, _divisor_restriction(table, 2, n - 1, cls), ("divisor",)))
    cands.append(SubvarietyCandidate("F", 1, (((0, 1), Fraction(1)),), ("fiber-line",)))

    a = (0,) + weights
    cones = {
        "kahler": ConeDescription("kahler", (Inequality((1, 0)), Inequality((0, 1)))),
        "nef": ConeDescription("nef", (Inequality((1, 0), False), Inequality((0, 1), False))),
        "pseff": ConeDescription("pseff", (Inequality((0, 1), False), Inequality((1, a[n - 1]), False))),
        "big": ConeDescription("big", (Inequality((0, 1)), Inequality((1, a[n - 1])))),
    }
    for p in range(1, n + 1):
        cones[f"modified:{p}"] = ConeDescription("modified", (Inequality((1, a[p - 1])), Inequality((0, 1))), p)

    regions = ()
    if d == 1 and weights == (1, 3):
        regions = (
            CompleteRegion(
                "j",
                (Condition((Fraction(1), Fraction(-1)), "=="), Condition((Fraction(0), Fraction(1)), ">")),
                (Condition((Fraction(1), Fraction(0)), ">"), Condition((Fraction(-1), Fraction(15)), ">")),
                "alpha on the ray L+H, beta = L+bH with b > 1/15",
            ),
        )
    return ManifoldPresentation(
        f"wu(d={d},weights={','.join(map(str, weights))})",
        n,
        ("L", "H"),
        tuple(sorted(table.items())),
        cones,
        tuple(cands),
        regions,
        {"family": "wu", "d": d, "weights": list(weights)},
    )


def blowup_pn(n: int) -> ManifoldPresentation:
    """Blow-up of projective n-space at a point, basis (H, E)."""
    if int(n) != n or n < 2:
        raise ValueError("blowup_pn needs n >= 2")
    n = int(n)
    table = {(n, 0): Fraction(1), (0, n): Fraction((-1) ** (n - 1))}
    cands = [
        SubvarietyCandidate("Hbar", n - 1, _divisor_restriction(table, 2, n - 1, (1, 0)), ("divisor",)),
        SubvarietyCandidate("P", n - 1, _divisor_restriction(table, 2, n - 1, (1, -1)), ("divisor", "strict-transform")),
        SubvarietyCandidate("E", n - 1, _divisor_restriction(table, 2, n - 1, (0, 1)), ("divisor", "exceptional")),
    ]
    if n >= 3:
        cands.append(SubvarietyCandidate("line_in_E", 1, (((0, 1), Fraction(-1)),), ("curve",)))
    cones = {
        "kahler": ConeDescription("kahler", (Inequality((1, 1)), Inequality((0, -1)))),
        "nef": ConeDescription("nef", (Inequality((1, 1), False), Inequality((0, -1), False))),
        "pseff": ConeDescription("pseff", (Inequality((1, 0), False), Inequality((1, 1), False))),
        "big": ConeDescription("big", (Inequality((1, 0)), Inequality((1, 1)))),
        "modified:1": ConeDescription("modified", (Inequality((1, 1)), Inequality((0, -1))), 1),
        f"modified:{n}": ConeDescription("modified", (Inequality((1, 0)), Inequality((1, 1))), n),
    }
    return ManifoldPresentation(
        f"blowup_pn(n={n})",
        n,
        ("H", "E"),
        tuple(sorted(table.items())),
        cones,
        tuple(cands),
        (),
        {"family": "blowup", "n": n},
    )


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_RATIONAL = {"type": ["string", "integer"]}
_ENTRY = {
    "type": "object",
    "properties": {
        "monomial": {
            "oneOf": [
                {"type": "array", "items": {"type": "integer", "minimum": 0}},
                {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
            ]
        },
        "indices": {"type": "array", "items": {"type": ["string", "integer"]}},
        "value": _RATIONAL,
    },
    "required": ["value"],
    "oneOf": [{"required": ["monomial"]}, {"required": ["indices"]}],
}
_INEQ = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": _RATIONAL}, "strict": {"type": "boolean"}},
    "required": ["coeffs"],
}
_CONE = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["kahler", "nef", "pseff", "big", "modified"]},
        "p": {"type": "integer", "minimum": 1},
        "ineqs": {"type": "array", "items": _INEQ},
    },
    "required": ["kind", "ineqs"],
}
_COND = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": _RATIONAL}, "rel": {"enum": [">", ">=", "=="]}},
    "required": ["coeffs", "rel"],
}
MANIFOLD_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "tensor": {"type": "array", "items": _ENTRY},
        "cones": {"oneOf": [{"type": "object", "additionalProperties": _CONE}, {"type": "array", "items": _CONE}]},
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "dim": {"type": "integer", "minimum": 1},
                    "tensor": {"type": "array", "items": _ENTRY},
                    "tags": {"type": "array", "items": {"type": "string"}},
                },
                "required": ["name", "dim", "tensor"],
            },
        },
        "complete_regions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "statement": {"type": "string"},
                    "alpha": {"type": "array", "items": _COND},
                    "beta": {"type": "array", "items": _COND},
                    "note": {"type": "string"},
                },
                "required": ["statement", "alpha", "beta"],
            },
        },
        "meta": {"type": "object"},
    },
    "required": ["name", "dim", "basis", "tensor"],
}


def _tensor_json(tensor: tuple) -> list:
    return [{"monomial": list(e), "value": format_rational(v)} for e, v in tensor]


def _parse_tensor(entries: list, basis: Sequence[str], degree: int, owner: str) -> tuple:
    size = len(basis)
    index = {b: i for i, b in enumerate(basis)}
    seen: dict = {}
    for entry in entries:
        value = parse_rational(entry["value"])
        if "monomial" in entry:
            mono = entry["monomial"]
            if isinstance(mono, dict):
                unknown = [k for k in mono if k not in index]
                if unknown:
                    raise SchemaError(f"{owner}: unknown basis name(s) {unknown}")
                e = [0] * size
                for k, power in mono.items():
                    e[index[k]] = power
                e = tuple(e)
            else:
                e = tuple(mono)
            _check_monomial(e, size, degree, owner)
        else:
            idx = []
            for k in entry["indices"]:
                if isinstance(k, str):
                    if k not in index:
                        raise SchemaError(f"{owner}: unknown basis name {k!r}")
                    idx.append(index[k])
                elif 0 <= k < size:
                    idx.append(k)
                else:
                    raise ArityError(f"{owner}: basis index {k} out of range")
            if len(idx) != degree:
                raise ArityError(f"{owner}: {len(idx)} indices for a form of degree {degree}")
            e = tuple(idx.count(j) for j in range(size))
        if e in seen and seen[e] != value:
            raise AsymmetricTensorError(
                f"{owner}: conflicting values {format_rational(seen[e])} and {format_rational(value)} for monomial {list(e)}"
            )
        seen[e] = value
    return _normalize_table(seen.items())


def save_manifold(m: ManifoldPresentation) -> dict:
    return {
        "name": m.name,
        "dim": m.dim,
        "basis": list(m.basis),
        "tensor": _tensor_json(m.tensor),
        "cones": {k: m.cones[k].to_json() for k in sorted(m.cones)},
        "candidates": [v.to_json() for v in m.candidates],
        "complete_regions": [r.to_json() for r in m.complete_regions],
        "meta": dict(m.meta),
    }


def load_manifold(doc: Union[dict, str]) -> ManifoldPresentation:
    """Build a presentation from a JSON document (dict or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, MANIFOLD_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{path or '<root>'}: {exc.message}") from None
    basis = tuple(doc["basis"])
    n = doc["dim"]
    try:
        tensor = _parse_tensor(doc["tensor"], basis, n, doc["name"])
        raw_cones = doc.get("cones", {})
        cone_list = raw_cones.values() if isinstance(raw_cones, dict) else raw_cones
        cones = {}
        for c in cone_list:
            desc = ConeDescription.from_json(c)
            cones[desc.key] = desc
        cands = tuple(
            SubvarietyCandidate(c["name"], c["dim"], _parse_tensor(c["tensor"], basis, c["dim"], c["name"]), tuple(c.get("tags", ())))
            for c in doc.get("candidates", [])
        )
        regions = tuple(CompleteRegion.from_json(r) for r in doc.get("complete_regions", []))
    except PresentationError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(str(exc)) from None
    for r in regions:
        for c in r.alpha + r.beta:
            if len(c.coeffs) != len(basis):
                raise ArityError(f"complete region condition of length {len(c.coeffs)}")
    return ManifoldPresentation(doc["name"], n, basis, tensor, cones, cands, regions, dict(doc.get("meta", {})))

"""Bivariate polynomials on the triangle.

`BaryPoly` stores c(l, m) for the terms x^l y^m (1-x-y)^(N-l-m), the basis the
Rodrigues operators act on. `MonoPoly` stores a(a, b) for z^a w^b; the
variables (z, w) play the role of (x, y).
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Dict, Iterator, Tuple, Union

from trijp.scalar import Scalar, format_scalar

Key = Tuple[int, int]


class DegreeMismatchError(ValueError):
    """Two barycentric polynomials with different nominal degree were combined."""


def _canonical(coeffs: Dict[Key, Scalar], degree: int, name: str) -> Dict[Key, Scalar]:
    if degree < 0:
        raise ValueError(f"{name} degree must be nonnegative, got {degree}")
    clean = {}
    for (l, m), c in coeffs.items():
        if l < 0 or m < 0 or l + m > degree:
            raise ValueError(f"{name} key {(l, m)} outside degree {degree}")
        if c != 0:
            clean[(int(l), int(m))] = c
    return dict(sorted(clean.items()))


@dataclass(frozen=True)
class BaryPoly:
    degree: int
    coeffs: Dict[Key, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = _canonical(self.coeffs, self.degree, "BaryPoly")
        object.__setattr__(self, "coeffs", coeffs)

    def __iter__(self) -> Iterator[Tuple[Key, Scalar]]:
        return iter(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class MonoPoly:
    degree: int
    coeffs: Dict[Key, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = _canonical(self.coeffs, self.degree, "MonoPoly")
        object.__setattr__(self, "coeffs", coeffs)

    def __iter__(self) -> Iterator[Tuple[Key, Scalar]]:
        return iter(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def total_degree(self) -> int:
        """Actual total degree, -1 for the zero polynomial."""
        return max((a + b for a, b in self.coeffs), default=-1)


Poly = Union[BaryPoly, MonoPoly]


def bary_to_mono(p: BaryPoly) -> MonoPoly:
    """
    Expand every (1-x-y)^s factor with the trinomial theorem.

    Parameters:
    p (BaryPoly): polynomial in the barycentric-term basis.

    Returns:
    MonoPoly: the same function of (x, y), keyed by monomial exponents.
    """
    out: Dict[Key, Scalar] = {}
    for (l, m), c in p:
        s = p.degree - l - m
        for a in range(s + 1):
            ca = comb(s, a)
            for b in range(s - a + 1):
                coeff = ca * comb(s - a, b)
                if (a + b) % 2:
                    coeff = -coeff
                key = (l + a, m + b)
                out[key] = out.get(key, 0) + c * coeff
    return MonoPoly(p.degree, out)


def evaluate(p: Poly, x, y):
    """
    Evaluate at (x, y). Exact for rational input; works elementwise on numpy
    arrays when the coefficients are floats (see `as_float`).
    """
    total = 0
    if isinstance(p, BaryPoly):
        u = 1 - x - y
        for (l, m), c in p:
            total = total + c * x**l * y**m * u ** (p.degree - l - m)
    else:
        for (a, b), c in p:
            total = total + c * x**a * y**b
    return total


def scale_add(p: BaryPoly, q: BaryPoly, c: Scalar) -> BaryPoly:
    """p + c q, coefficientwise."""
    if p.degree != q.degree:
        raise DegreeMismatchError(
            f"Cannot combine degree {p.degree} with degree {q.degree}"
        )
    out = dict(p.coeffs)
    for key, value in q:
        out[key] = out.get(key, 0) + c * value
    return BaryPoly(p.degree, out)


def perturb(p: Poly, key: Key, delta: Scalar = 1) -> Poly:
    """Return a copy of `p` with `delta` added to the coefficient at `key`."""
    out = dict(p.coeffs)
    out[key] = out.get(key, 0) + delta
    return type(p)(p.degree, out)


def as_float(p: Poly) -> Poly:
    return type(p)(p.degree, {key: float(c) for key, c in p})


def abs_poly(p: MonoPoly) -> MonoPoly:
    """Coefficientwise absolute value; evaluating it at (|z|, |w|) bounds |p|."""
    return MonoPoly(p.degree, {key: abs(c) for key, c in p})


def _term_order(item):
    (a, b), _ = item
    return (-(a + b), -b)


def format_mono(p: MonoPoly, names: Tuple[str, str] = ("z", "w")) -> str:
    """
    Human readable form, highest total degree first and, within one degree,
    highest power of the second variable first.
    """
    if p.is_zero():
        return "0"
    parts = []
    for (a, b), c in sorted(p.coeffs.items(), key=_term_order):
        factors = []
        if b:
            factors.append(names[1] if b == 1 else f"{names[1]}^{b}")
        if a:
            factors.append(names[0] if a == 1 else f"{names[0]}^{a}")
        parts.append(_join_term(c, factors))
    return _join_signed(parts)


def format_bary(p: BaryPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for (l, m), c in sorted(p.coeffs.items(), key=_term_order):
        s = p.degree - l - m
        factors = []
        if l:
            factors.append("x" if l == 1 else f"x^{l}")
        if m:
            factors.append("y" if m == 1 else f"y^{m}")
        if s:
            factors.append("(1-x-y)" if s == 1 else f"(1-x-y)^{s}")
        parts.append(_join_term(c, factors))
    return _join_signed(parts)


def _join_term(c: Scalar, factors) -> str:
    if not factors:
        return format_scalar(c)
    if c == 1:
        return "*".join(factors)
    if c == -1:
        return "-" + "*".join(factors)
    return "*".join([format_scalar(c)] + factors)


def _join_signed(parts) -> str:
    text = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            text += " - " + part[1:]
        else:
            text += " + " + part
    return text


def to_dict(p: Poly) -> dict:
    """JSON-ready form; rationals as numerator/denominator, floats as `coeff`."""
    terms = []
    for (l, m), c in p:
        if isinstance(c, Rational):
            c = Fraction(c)
            terms.append(
                {"l": l, "m": m, "coeff_num": c.numerator, "coeff_den": c.denominator}
            )
        else:
            terms.append({"l": l, "m": m, "coeff": float(c)})
    basis = "bary" if isinstance(p, BaryPoly) else "mono"
    return {"basis": basis, "degree": p.degree, "terms": terms}


def from_dict(data: dict) -> Poly:
    cls = {"bary": BaryPoly, "mono": MonoPoly}[data["basis"]]
    coeffs = {}
    for term in data["terms"]:
        if "coeff" in term:
            value = float(term["coeff"])
        else:
            value = Fraction(term["coeff_num"], term["coeff_den"])
        coeffs[(term["l"], term["m"])] = value
    return cls(data["degree"], coeffs)


def to_json(p: Poly) -> str:
    return json.dumps(to_dict(p))


def from_json(text: str) -> Poly:
    return from_dict(json.loads(text))

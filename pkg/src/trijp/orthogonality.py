"""Moments of the Jacobi weights on the triangle and orthogonality checks."""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Optional, Sequence, Tuple

from trijp.rodrigues import IndexPair, ParamSet, jp_poly_operator, total_index
from trijp.scalar import (
    DomainError,
    Mode,
    Scalar,
    ln_gamma,
    mode_of,
    pochhammer,
    pochhammer_table,
)
from trijp.simplex_poly import BaryPoly

log = logging.getLogger(__name__)

DEFAULT_FLOAT_TOL = 1e-10


def simplex_moment(a: Scalar, b: Scalar, c: Scalar) -> float:
    """
    Integral of x^a y^b (1-x-y)^c over the unit triangle,
    Gamma(a+1) Gamma(b+1) Gamma(c+1) / Gamma(a+b+c+3).
    """
    for value in (a, b, c):
        if not value > -1:
            raise DomainError(f"Moment exponents must exceed -1, got ({a}, {b}, {c})")
    return math.exp(
        ln_gamma(a + 1) + ln_gamma(b + 1) + ln_gamma(c + 1) - ln_gamma(a + b + c + 3)
    )


def in_condition_set(l: int, m: int, pair: IndexPair) -> bool:
    """(l, m) belongs to the vanishing set {l < n_j - k_j or m < k_j}."""
    return l < pair.n - pair.k or m < pair.k


def on_boundary(l: int, m: int, pair: IndexPair) -> bool:
    """Outside the vanishing set but on one of its two edges."""
    if in_condition_set(l, m, pair):
        return False
    return l == pair.n - pair.k or m == pair.k


class _MomentTables:
    """Pochhammer tables (a+1)_s, (b+1)_s, (g+1)_s shared by many inner products."""

    def __init__(self, params: ParamSet, j: int, size: int):
        alpha, beta = params.measure(j)
        self.alpha = pochhammer_table(alpha + 1, size)
        self.beta = pochhammer_table(beta + 1, size)
        self.gamma = pochhammer_table(params.gamma + 1, size)

    def inner(self, p: BaryPoly, l: int, m: int) -> Tuple[Scalar, Scalar]:
        """Normalized inner product and the sum of absolute term values."""
        value = 0
        scale = 0
        for (lp, mp), c in p:
            term = c * self.alpha[lp + l] * self.beta[mp + m]
            term *= self.gamma[p.degree - lp - mp]
            value += term
            scale += abs(term)
        return value, scale


def normalized_inner_product(
    p: BaryPoly, l: int, m: int, params: ParamSet, j: int
) -> Scalar:
    """
    Integral of p(x, y) x^l y^m W_j over the triangle, divided by
    Gamma(a_j+1) Gamma(b_j+1) Gamma(g+1) / Gamma(a_j+b_j+g+N+l+m+3).

    Every barycentric term has the same Gamma denominator, so the result is
    sum c(l', m') (a_j+1)_{l'+l} (b_j+1)_{m'+m} (g+1)_{N-l'-m'}, a rational
    number for rational parameters with the sign and zero pattern of the
    true integral.
    """
    tables = _MomentTables(params, j, p.degree + l + m)
    return tables.inner(p, l, m)[0]


@dataclass
class ResidualEntry:
    l: int
    m: int
    residual: Scalar
    in_set: bool
    boundary: bool
    scale: Scalar = 0

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "m": self.m,
            "in_set": self.in_set,
            "boundary": self.boundary,
            "residual": format_residual(self.residual),
        }


@dataclass
class OrthogonalityReport:
    """
    Per-measure residuals on the grid l + m <= max_total_degree.

    `passed` holds when every in-set residual is exactly zero (exact mode)
    or within `tol` of zero relative to the size of its terms (float mode).
    Boundary entries are reported, never asserted.
    """

    kind: str
    max_total_degree: int
    mode: Mode
    measures: Dict[int, List[ResidualEntry]] = field(default_factory=dict)
    measure_passed: Dict[int, bool] = field(default_factory=dict)
    tol: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(self.measure_passed.values())

    @property
    def max_abs_residual(self) -> Scalar:
        values = [
            abs(e.residual)
            for entries in self.measures.values()
            for e in entries
            if e.in_set
        ]
        return max(values, default=0)

    def failures(self) -> List[Tuple[int, ResidualEntry]]:
        return [
            (j, e)
            for j, entries in self.measures.items()
            for e in entries
            if e.in_set and not vanishes(e.residual, self.mode, e.scale, self.tol)
        ]

    def boundary_residuals(self, j: int) -> List[ResidualEntry]:
        return [e for e in self.measures[j] if e.boundary]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "max_total_degree": self.max_total_degree,
            "mode": self.mode.value,
            "tol": self.tol,
            "pass": self.passed,
            "max_abs_residual": format_residual(self.max_abs_residual),
            "measures": [
                {
                    "measure": j,
                    "pairs": [e.to_dict() for e in entries],
                    "pass": self.measure_passed[j],
                }
                for j, entries in sorted(self.measures.items())
            ],
        }

    def add(self, j: int, entry: ResidualEntry):
        self.measures.setdefault(j, []).append(entry)
        ok = not entry.in_set or vanishes(
            entry.residual, self.mode, entry.scale, self.tol
        )
        self.measure_passed[j] = self.measure_passed.get(j, True) and ok


def format_residual(value: Scalar):
    """Rationals as "p/q" strings (zero is "0/1"), floats unchanged."""
    if isinstance(value, Rational):
        value = Fraction(value)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def vanishes(
    value: Scalar, mode: Mode, scale: Scalar, tol: Optional[float] = None
) -> bool:
    """Exact zero in exact mode, |value| <= tol * scale in float mode."""
    if mode is Mode.EXACT:
        return value == 0
    tol = DEFAULT_FLOAT_TOL if tol is None else tol
    return abs(value) <= tol * max(float(scale), 1e-300)


def default_max_degree(pairs: Sequence[IndexPair]) -> int:
    return total_index(pairs) + 2


def verify_orthogonality(
    params: ParamSet,
    pairs: Sequence[IndexPair],
    max_total_degree: Optional[int] = None,
    tol: Optional[float] = None,
    poly: Optional[BaryPoly] = None,
) -> OrthogonalityReport:
    """
    Check the multiple orthogonality of the Rodrigues polynomial.

    Parameters:
    params (ParamSet): weight parameters.
    pairs (list): one IndexPair per measure.
    max_total_degree (int): truncation of the monomial grid x^l y^m,
        defaults to n_1+...+n_r+2.
    tol (float): float-mode tolerance relative to the summed term sizes.
    poly (BaryPoly): polynomial to check instead of the constructed one.

    Returns:
    OrthogonalityReport
    """
    if poly is None:
        poly = jp_poly_operator(params, pairs)
    if max_total_degree is None:
        max_total_degree = default_max_degree(pairs)
    mode = mode_of([params.gamma, *params.alphas, *params.betas, *poly.coeffs.values()])
    report = OrthogonalityReport("orthogonality", max_total_degree, mode, tol=tol)
    for j, pair in enumerate(pairs, start=1):
        tables = _MomentTables(params, j, poly.degree + max_total_degree)
        for total in range(max_total_degree + 1):
            for m in range(total + 1):
                l = total - m
                value, scale = tables.inner(poly, l, m)
                entry = ResidualEntry(
                    l,
                    m,
                    value,
                    in_condition_set(l, m, pair),
                    on_boundary(l, m, pair),
                    scale,
                )
                report.add(j, entry)
        outcome = "holds" if report.measure_passed[j] else "fails"
        log.debug(f"Measure {j}: orthogonality {outcome}")
    return report


def univariate_inner_product(
    coeffs: Sequence[Scalar], k: int, alpha: Scalar, beta: Scalar
) -> Scalar:
    """
    Integral over [0, 1] of P(x) x^k x^alpha (1-x)^beta for P given by its
    monomial coefficients, divided by
    Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+deg+k+2).
    """
    degree = len(coeffs) - 1
    total = 0
    for a, c in enumerate(coeffs):
        if c:
            head = pochhammer(alpha + 1, a + k)
            total += c * head * pochhammer(alpha + beta + a + k + 2, degree - a)
    return total

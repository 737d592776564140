"""Hermite-Pade approximants of the Stieltjes transforms E_j on the triangle.

E_j(z, w) = int_T W_j(x, y) / ((z - x)(w - y)) dx dy
          = sum_{l, m >= 0} c_{l,m} z^{-l-1} w^{-m-1}

With A the common denominator, the numerator

Phi_j(z, w) = int_T (A(z, w) - A(x, y)) / ((z - x)(w - y)) W_j dx dy

splits into four pieces psi11 + psi12 + psi21 + psi22, each a finite sum
or a finite sum times a 2F1 series in 1/w or 1/z, and

A E_j - Phi_j = c_{0,0} sum_{l, m} F_{l,m} z^{-l-1} w^{-m-1}

where F_{l,m} = fractional_coeff(A, ..., l, m).
"""
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from trijp.orthogonality import (
    OrthogonalityReport,
    ResidualEntry,
    default_max_degree,
    in_condition_set,
    on_boundary,
    simplex_moment,
    vanishes,
)
from trijp.rodrigues import IndexPair, ParamSet, jp_poly_operator
from trijp.scalar import (
    DEFAULT_2F1_TOL,
    DomainError,
    Mode,
    Scalar,
    gamma_ratio,
    gauss_2f1,
    mode_of,
    pochhammer_table,
)
from trijp.simplex_poly import BaryPoly, MonoPoly, abs_poly, bary_to_mono, evaluate

log = logging.getLogger(__name__)

DEFAULT_POLE_THRESHOLD = 1e-12

Key3 = Tuple[int, int, int]


class PoleError(ZeroDivisionError):
    """The common denominator vanishes (relative to its size) at the point."""


def series_coeff(params: ParamSet, j: int, l: int, m: int) -> float:
    """c_{l,m} = Gamma(g+1) Gamma(a_j+l+1) Gamma(b_j+m+1) / Gamma(a_j+b_j+g+l+m+3)."""
    if l < 0 or m < 0:
        raise DomainError(f"Series indices must be nonnegative, got ({l}, {m})")
    alpha, beta = params.measure(j)
    return simplex_moment(alpha + l, beta + m, params.gamma)


def series_table(params: ParamSet, j: int, L: int, M: int) -> np.ndarray:
    """c_{l,m} for 0 <= l <= L, 0 <= m <= M as an (L+1, M+1) array."""
    alpha, beta = params.measure(j)
    alpha, beta, gamma = float(alpha), float(beta), float(params.gamma)
    l = np.arange(L + 1)[:, None]
    m = np.arange(M + 1)[None, :]
    return np.exp(
        gammaln(gamma + 1)
        + gammaln(alpha + l + 1)
        + gammaln(beta + m + 1)
        - gammaln(alpha + beta + gamma + l + m + 3)
    )


def _check_outside(z, w):
    if abs(z) <= 1 or abs(w) <= 1:
        raise DomainError(
            f"The expansion at infinity needs |z| > 1 and |w| > 1, got ({z}, {w})"
        )


def E_truncated(params: ParamSet, j: int, z: float, w: float, L: int, M: int) -> float:
    """Partial sum of the Laurent series of E_j over l <= L, m <= M."""
    _check_outside(z, w)
    table = series_table(params, j, L, M)
    zi = float(z) ** -(np.arange(L + 1) + 1.0)
    wi = float(w) ** -(np.arange(M + 1) + 1.0)
    return float(zi @ table @ wi)


class _FractionalTables:
    def __init__(self, params: ParamSet, j: int, size: int):
        alpha, beta = params.measure(j)
        self.alpha = pochhammer_table(alpha + 1, size)
        self.beta = pochhammer_table(beta + 1, size)
        self.total = pochhammer_table(alpha + beta + params.gamma + 3, size)

    def coeff(self, A: MonoPoly, l: int, m: int) -> Tuple[Scalar, Scalar]:
        value = 0
        scale = 0
        for (u, v), a in A:
            term = a * self.alpha[l + u] * self.beta[m + v] / self.total[l + m + u + v]
            value += term
            scale += abs(term)
        return value, scale


def fractional_coeff(A: MonoPoly, params: ParamSet, j: int, l: int, m: int) -> Scalar:
    """
    Coefficient of z^{-l-1} w^{-m-1} in A E_j, relative to c_{0,0}:

        sum a_{u,v} c_{l+u, m+v} / c_{0,0}
            = sum a_{u,v} (a_j+1)_{l+u} (b_j+1)_{m+v} / (a_j+b_j+g+3)_{l+m+u+v}

    Exact for rational parameters and coefficients.
    """
    tables = _FractionalTables(params, j, A.degree + l + m)
    return tables.coeff(A, l, m)[0]


def _fractional_mode(A: MonoPoly, params: ParamSet) -> Mode:
    return mode_of([params.gamma, *params.alphas, *params.betas, *A.coeffs.values()])


def check_hp_conditions(
    A: MonoPoly,
    params: ParamSet,
    pairs: Sequence[IndexPair],
    max_total_degree: Optional[int] = None,
    tol: Optional[float] = None,
) -> OrthogonalityReport:
    """Fractional coefficients of A E_j on l + m <= max_total_degree, for every j."""
    if max_total_degree is None:
        max_total_degree = default_max_degree(pairs)
    mode = _fractional_mode(A, params)
    report = OrthogonalityReport("hermite_pade", max_total_degree, mode, tol=tol)
    for j, pair in enumerate(pairs, start=1):
        tables = _FractionalTables(params, j, A.degree + max_total_degree)
        for total in range(max_total_degree + 1):
            for m in range(total + 1):
                l = total - m
                value, scale = tables.coeff(A, l, m)
                entry = ResidualEntry(
                    l,
                    m,
                    value,
                    in_condition_set(l, m, pair),
                    on_boundary(l, m, pair),
                    scale,
                )
                report.add(j, entry)
    return report


@dataclass
class MeasureOrder:
    measure: int
    expected: Tuple[int, int]
    nonzero: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def corner(self) -> Optional[Tuple[int, int]]:
        """Smallest l and smallest m over the nonzero coefficients."""
        if not self.nonzero:
            return None
        return min(l for l, _ in self.nonzero), min(m for _, m in self.nonzero)

    @property
    def passed(self) -> bool:
        lo, mo = self.expected
        return all(l >= lo and m >= mo for l, m in self.nonzero)

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "expected_corner": list(self.expected),
            "corner": None if self.corner is None else list(self.corner),
            "nonzero": [list(key) for key in self.nonzero],
            "pass": self.passed,
        }


@dataclass
class ResidualOrderReport:
    max_total_degree: int
    measures: Dict[int, MeasureOrder] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.measures.values())

    def to_dict(self) -> dict:
        return {
            "max_total_degree": self.max_total_degree,
            "pass": self.passed,
            "measures": [self.measures[j].to_dict() for j in sorted(self.measures)],
        }


def residual_order_check(
    A: MonoPoly,
    params: ParamSet,
    pairs: Sequence[IndexPair],
    max_total_degree: Optional[int] = None,
    tol: Optional[float] = None,
) -> ResidualOrderReport:
    """
    Locate the nonzero Laurent coefficients of A E_j - Phi_j.

    They must all sit at l >= n_j - k_j and m >= k_j; the first one is
    expected exactly at that corner.
    """
    hp = check_hp_conditions(A, params, pairs, max_total_degree, tol)
    report = ResidualOrderReport(hp.max_total_degree)
    nonzero = {(j, e.l, e.m) for j, e in _nonzero_entries(hp)}
    for j, pair in enumerate(pairs, start=1):
        entry = MeasureOrder(j, (pair.n - pair.k, pair.k))
        entry.nonzero = sorted((l, m) for jj, l, m in nonzero if jj == j)
        report.measures[j] = entry
    return report


def _nonzero_entries(report: OrthogonalityReport):
    for j, entries in report.measures.items():
        for e in entries:
            if not vanishes(e.residual, report.mode, e.scale, report.tol):
                yield j, e


def _weight_ratios(
    top: Scalar, bottom: Scalar, size: int, literal: bool
) -> List[Scalar]:
    if literal:
        return [1] * (size + 1)
    num = pochhammer_table(top, size)
    den = pochhammer_table(bottom, size)
    return [a / b for a, b in zip(num, den)]


def build_P10(
    A: MonoPoly, params: ParamSet, j: int, literal: bool = False
) -> Dict[Key3, Scalar]:
    """
    Coefficients of P10(z, w, y) = sum a_{u,v} rho_h w^v z^{u-1-h} (1-y)^h
    keyed by (z power, w power, (1-y) power).

    P10 is the difference quotient (A(z, w) - A(x, w)) / (z - x) with its
    x-dependence integrated against x^a_j (1-x-y)^g, which turns x^h into
    rho_h (1-y)^h with rho_h = (a_j+1)_h / (a_j+g+2)_h (common factor
    B(a_j+1, g+1) kept outside). `literal=True` drops rho_h.
    """
    alpha, _ = params.measure(j)
    rho = _weight_ratios(alpha + 1, alpha + params.gamma + 2, A.degree, literal)
    table: Dict[Key3, Scalar] = {}
    for (u, v), a in A:
        for h in range(u):
            key = (u - 1 - h, v, h)
            table[key] = table.get(key, 0) + a * rho[h]
    return {key: c for key, c in sorted(table.items()) if c != 0}


def build_P01(
    A: MonoPoly, params: ParamSet, j: int, literal: bool = False
) -> Dict[Key3, Scalar]:
    """
    Coefficients of P01(x, w) = sum a_{u,v} sigma_h x^u w^{v-1-h} (1-x)^h keyed
    by (x power, w power, (1-x) power), sigma_h = (b_j+1)_h / (b_j+g+2)_h.
    """
    _, beta = params.measure(j)
    sigma = _weight_ratios(beta + 1, beta + params.gamma + 2, A.degree, literal)
    table: Dict[Key3, Scalar] = {}
    for (u, v), a in A:
        for h in range(v):
            key = (u, v - 1 - h, h)
            table[key] = table.get(key, 0) + a * sigma[h]
    return {key: c for key, c in sorted(table.items()) if c != 0}


def expand_P01(table: Dict[Key3, Scalar], degree: int) -> MonoPoly:
    """Monomial coefficients b_{u,v} of P01 in (x, w), expanding (1-x)^h."""
    out: Dict[Tuple[int, int], Scalar] = {}
    for (u, v, h), c in table.items():
        for t in range(h + 1):
            coeff = comb(h, t) * c
            key = (u + t, v)
            out[key] = out.get(key, 0) + (-coeff if t % 2 else coeff)
    return MonoPoly(max(degree - 1, 0), out)


def eval_P10(table: Dict[Key3, Scalar], z, w, y):
    return sum(float(c) * z**a * w**b * (1 - y) ** h for (a, b, h), c in table.items())


def eval_P01(table: Dict[Key3, Scalar], x, w):
    return sum(float(c) * x**a * w**b * (1 - x) ** h for (a, b, h), c in table.items())


@dataclass(frozen=True)
class NumeratorState:
    """
    Everything needed to evaluate Phi_j for one measure: the denominator A,
    the P10 and P01 tables and the monomial expansion b of P01.
    """

    A: MonoPoly
    params: ParamSet
    j: int
    p10: Dict[Key3, Scalar]
    p01: Dict[Key3, Scalar]
    b: MonoPoly
    literal: bool = False

    @classmethod
    def from_polynomial(
        cls, A: MonoPoly, params: ParamSet, j: int, literal: bool = False
    ):
        p01 = build_P01(A, params, j, literal)
        return cls(
            A=A,
            params=params,
            j=j,
            p10=build_P10(A, params, j, literal),
            p01=p01,
            b=expand_P01(p01, A.degree),
            literal=literal,
        )

    @property
    def alpha(self) -> float:
        return float(self.params.measure(self.j)[0])

    @property
    def beta(self) -> float:
        return float(self.params.measure(self.j)[1])

    @property
    def gamma(self) -> float:
        return float(self.params.gamma)

    @property
    def c00(self) -> float:
        return series_coeff(self.params, self.j, 0, 0)

    def _ratios(self, top: float, size: int) -> List[float]:
        total = self.alpha + self.beta + self.gamma + 3
        num = pochhammer_table(top, size)
        den = pochhammer_table(total, size)
        return [a / b for a, b in zip(num, den)]


def psi11(state: NumeratorState, z: float, w: float) -> float:
    """Polynomial piece from the y-difference quotient of P10."""
    z, w = float(z), float(w)
    ratios = state._ratios(state.alpha + state.gamma + 2, max(state.A.degree, 1))
    total = 0.0
    for (a, b, h), c in state.p10.items():
        if h == 0:
            continue
        inner = sum((1 - w) ** k * ratios[h - 1 - k] for k in range(h))
        total += float(c) * z**a * w**b * inner
    return state.c00 * total


def psi12(
    state: NumeratorState, z: float, w: float, tol: float = DEFAULT_2F1_TOL
) -> float:
    """c00 / w * P10(z, w, w) * 2F1(b_j+1, 1; a_j+b_j+g+3; 1/w)."""
    z, w = float(z), float(w)
    if abs(w) <= 1:
        raise DomainError(f"psi12 needs |w| > 1, got {w}")
    if not state.p10:
        return 0.0
    total = state.alpha + state.beta + state.gamma + 3
    series = gauss_2f1(state.beta + 1, 1, total, 1 / w, tol)
    return state.c00 / w * eval_P10(state.p10, z, w, w) * series


def psi21(state: NumeratorState, z: float, w: float) -> float:
    """Polynomial piece from the x-difference quotient of P01."""
    z, w = float(z), float(w)
    ratios = state._ratios(state.alpha + 1, max(state.b.degree, 1))
    total = 0.0
    for (u, v), c in state.b:
        if u == 0:
            continue
        inner = sum(z ** (u - 1 - h) * ratios[h] for h in range(u))
        total += float(c) * w**v * inner
    return -state.c00 * total


def psi22(
    state: NumeratorState,
    z: float,
    w: float,
    tol: float = DEFAULT_2F1_TOL,
    literal_prefactor: bool = False,
) -> float:
    """
    c00 / z * P01(z, w) * 2F1(a_j+1, 1; a_j+b_j+g+3; 1/z).

    `literal_prefactor=True` swaps Gamma(a_j+b_j+g+3) in c00 for the
    first measure's Gamma(a_1+b_1+g+3).
    """
    z, w = float(z), float(w)
    if abs(z) <= 1:
        raise DomainError(f"psi22 needs |z| > 1, got {z}")
    if not state.p01:
        return 0.0
    total = state.alpha + state.beta + state.gamma + 3
    prefactor = state.c00
    if literal_prefactor:
        alpha1, beta1 = state.params.measure(1)
        prefactor *= gamma_ratio(total, float(alpha1 + beta1 + state.params.gamma) + 3)
    series = gauss_2f1(state.alpha + 1, 1, total, 1 / z, tol)
    return prefactor / z * eval_P01(state.p01, z, w) * series


def phi(
    state: NumeratorState, z: float, w: float, tol: float = DEFAULT_2F1_TOL
) -> float:
    """Phi_j = psi11 + psi12 + psi21 + psi22."""
    _check_outside(z, w)
    first = psi11(state, z, w) + psi12(state, z, w, tol)
    return first + psi21(state, z, w) + psi22(state, z, w, tol)


class HermitePadeApproximant:
    """
    R_j = Phi_j / P for the Rodrigues polynomial P (or a supplied one),
    with one NumeratorState per measure.
    """

    def __init__(
        self,
        params: ParamSet,
        pairs: Sequence[IndexPair],
        poly: Optional[BaryPoly] = None,
        tol: float = DEFAULT_2F1_TOL,
        threshold: float = DEFAULT_POLE_THRESHOLD,
    ):
        self.params = params
        self.pairs = list(pairs)
        self.poly = jp_poly_operator(params, pairs) if poly is None else poly
        self.A = bary_to_mono(self.poly)
        self.tol = tol
        self.threshold = threshold
        self.states = {
            j: NumeratorState.from_polynomial(self.A, params, j)
            for j in range(1, params.r + 1)
        }
        self._abs_A = abs_poly(self.A)

    def denominator(self, z: float, w: float) -> float:
        """P(z, w), raising PoleError where it is small against sum |a| |z|^u |w|^v."""
        z, w = float(z), float(w)
        value = float(evaluate(self.A, z, w))
        size = float(evaluate(self._abs_A, abs(z), abs(w)))
        if abs(value) < self.threshold * size or size == 0:
            raise PoleError(f"Denominator vanishes at ({z}, {w}): |P|={abs(value):.3e}")
        return value

    def numerator(self, j: int, z: float, w: float) -> float:
        return phi(self.states[j], z, w, self.tol)

    def __call__(self, j: int, z: float, w: float) -> float:
        return self.numerator(j, z, w) / self.denominator(z, w)


def approximant_eval(
    params: ParamSet,
    pairs: Sequence[IndexPair],
    j: int,
    z: float,
    w: float,
    tol: float = DEFAULT_2F1_TOL,
    threshold: float = DEFAULT_POLE_THRESHOLD,
) -> float:
    """Evaluate R_j(z, w) = Phi_j(z, w) / P(z, w)."""
    params.measure(j)
    return HermitePadeApproximant(params, pairs, tol=tol, threshold=threshold)(j, z, w)

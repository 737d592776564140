"""Rodrigues operators on the triangle and the polynomials they generate.

For measure j with weight W_j = x^a_j y^b_j (1-x-y)^g and a pair (n_j, k_j),
the operator

    D_j[f] = W_j^{-1} d^{n_j} / dx^{n_j-k_j} dy^{k_j} (x^{n_j-k_j} y^{k_j} W_j f)

sends a barycentric term x^l y^m (1-x-y)^{n-l-m} to a combination of terms
of the same total degree n. Everything here works on coefficients; no
symbolic differentiation is involved.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from trijp.scalar import Mode, Scalar, mode_of, parse_scalar, pochhammer
from trijp.simplex_poly import BaryPoly, Key

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """Invalid parameters, index pairs or operator input."""


@dataclass(frozen=True)
class ParamSet:
    """
    Weight parameters (alphas, betas, gamma) of r Jacobi measures on the
    triangle. Measure j (1-based) has weight x^alphas[j-1] y^betas[j-1]
    (1-x-y)^gamma.
    """

    alphas: Tuple[Scalar, ...]
    betas: Tuple[Scalar, ...]
    gamma: Scalar

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "betas", tuple(self.betas))
        if not self.alphas:
            raise PreconditionError("At least one measure is required")
        if len(self.alphas) != len(self.betas):
            raise PreconditionError(
                f"Got {len(self.alphas)} alphas but {len(self.betas)} betas"
            )
        for value in self.alphas + self.betas + (self.gamma,):
            if not value > -1:
                raise PreconditionError(f"Weight exponents must exceed -1, got {value}")
        seen = set()
        for pair in zip(self.alphas, self.betas):
            if pair in seen:
                raise PreconditionError(
                    f"Measures must differ, (alpha, beta)={pair} repeats"
                )
            seen.add(pair)

    @classmethod
    def parse(cls, alphas: Sequence, betas: Sequence, gamma) -> "ParamSet":
        return cls(
            tuple(parse_scalar(a) for a in alphas),
            tuple(parse_scalar(b) for b in betas),
            parse_scalar(gamma),
        )

    @property
    def r(self) -> int:
        return len(self.alphas)

    @property
    def mode(self) -> Mode:
        return mode_of(self.alphas + self.betas + (self.gamma,))

    def measure(self, j: int) -> Tuple[Scalar, Scalar]:
        """(alpha_j, beta_j) of measure j, counted from 1."""
        if not 1 <= j <= self.r:
            raise PreconditionError(f"Measure index {j} outside 1..{self.r}")
        return self.alphas[j - 1], self.betas[j - 1]

    def reordered(self, order: Sequence[int]) -> "ParamSet":
        return ParamSet(
            tuple(self.alphas[j - 1] for j in order),
            tuple(self.betas[j - 1] for j in order),
            self.gamma,
        )


@dataclass(frozen=True)
class IndexPair:
    n: int
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise PreconditionError(
                f"Index pair needs 0 <= k <= n, got n={self.n}, k={self.k}"
            )

    @classmethod
    def parse(cls, text) -> "IndexPair":
        """Accept "2:1", "2,1" or a two element sequence."""
        if isinstance(text, str):
            parts = text.replace(",", ":").split(":")
        else:
            parts = list(text)
        if len(parts) != 2:
            raise PreconditionError(f"Cannot read index pair from {text!r}")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except (TypeError, ValueError):
            raise PreconditionError(f"Cannot read index pair from {text!r}")


def total_index(pairs: Sequence[IndexPair]) -> int:
    return sum(pair.n for pair in pairs)


def _check_pairs(params: ParamSet, pairs: Sequence[IndexPair]):
    if len(pairs) != params.r:
        raise PreconditionError(f"Got {len(pairs)} index pairs for {params.r} measures")


def operator_coefficient(
    alpha: Scalar,
    beta: Scalar,
    gamma: Scalar,
    pair: IndexPair,
    term: Tuple[int, int, int],
    p: int,
    i: int,
) -> Scalar:
    """
    Coefficient of x^{l+p} y^{m+i} (1-x-y)^{n-l-m-i-p} in
    D[x^l y^m (1-x-y)^{n-l-m}].

    The y-derivatives give the factor in i, the x-derivatives the factor in p.
    """
    l, m, n = term
    nk = pair.n - pair.k
    g = gamma + n - l - m
    y_part = comb(pair.k, i) * pochhammer(beta + m + i + 1, pair.k - i)
    y_part *= pochhammer(g - i + 1, i)
    x_part = comb(nk, p) * pochhammer(alpha + l + p + 1, nk - p)
    x_part *= pochhammer(g - i - p + 1, p)
    if (i + p) % 2:
        return -y_part * x_part
    return y_part * x_part


def _apply_term(
    alpha: Scalar,
    beta: Scalar,
    gamma: Scalar,
    pair: IndexPair,
    term: Tuple[int, int, int],
    scale: Scalar,
    out: Dict[Key, Scalar],
):
    l, m, n = term
    if l < 0 or m < 0 or l + m > n:
        raise PreconditionError(f"Term {term} is not a barycentric term of degree {n}")
    if n - l - m < pair.n:
        raise PreconditionError(
            f"Term {term} has (1-x-y)-exponent {n - l - m} < n_j={pair.n}; "
            "the operator image is not a polynomial"
        )
    for i in range(pair.k + 1):
        for p in range(pair.n - pair.k + 1):
            c = operator_coefficient(alpha, beta, gamma, pair, term, p, i)
            key = (l + p, m + i)
            out[key] = out.get(key, 0) + scale * c


def apply_D(
    params: ParamSet, j: int, pair: IndexPair, term: Tuple[int, int, int]
) -> BaryPoly:
    """
    Apply the Rodrigues operator of measure j to one barycentric term.

    Parameters:
    params (ParamSet): weight parameters.
    j (int): measure index, counted from 1.
    pair (IndexPair): (n_j, k_j) of the operator.
    term (tuple): (l, m, n) for x^l y^m (1-x-y)^{n-l-m}.

    Returns:
    BaryPoly: image of degree n.
    """
    alpha, beta = params.measure(j)
    out: Dict[Key, Scalar] = {}
    _apply_term(alpha, beta, params.gamma, pair, term, 1, out)
    return BaryPoly(term[2], out)


def apply_D_poly(params: ParamSet, j: int, pair: IndexPair, p: BaryPoly) -> BaryPoly:
    """Linear extension of `apply_D` over the terms of `p`."""
    alpha, beta = params.measure(j)
    out: Dict[Key, Scalar] = {}
    for (l, m), c in p:
        _apply_term(alpha, beta, params.gamma, pair, (l, m, p.degree), c, out)
    return BaryPoly(p.degree, out)


def jp_poly_operator(
    params: ParamSet,
    pairs: Sequence[IndexPair],
    order: Optional[Sequence[int]] = None,
) -> BaryPoly:
    """
    Compose the Rodrigues operators on the seed (1-x-y)^{n_1+...+n_r}.

    Parameters:
    params (ParamSet): weight parameters of the r measures.
    pairs (list): one IndexPair per measure.
    order (list): measure indices (from 1) in the order the operators are
        applied; defaults to 1..r.

    Returns:
    BaryPoly: the multiple orthogonal polynomial, total degree n_1+...+n_r.
    """
    _check_pairs(params, pairs)
    if order is None:
        order = range(1, params.r + 1)
    order = list(order)
    if sorted(order) != list(range(1, params.r + 1)):
        raise PreconditionError(
            f"Operator order {order} is not a permutation of 1..{params.r}"
        )
    n = total_index(pairs)
    poly = BaryPoly(n, {(0, 0): Fraction(1) if params.mode is Mode.EXACT else 1.0})
    for j in order:
        poly = apply_D_poly(params, j, pairs[j - 1], poly)
    log.debug(
        f"Built degree {n} polynomial with {len(poly.coeffs)} terms, order {order}"
    )
    return poly


def triangle_rodrigues(
    alpha: Scalar, beta: Scalar, gamma: Scalar, n: int, k: int
) -> BaryPoly:
    """Single-measure case: the classical Rodrigues polynomial U_{k,n}."""
    return jp_poly_operator(ParamSet((alpha,), (beta,), gamma), [IndexPair(n, k)])


def _seed_coefficient(n1, k1, alpha1, beta1, gamma, n, p, i):
    # (k-n)_p (-k)_i / (p! i!) carries the signs and binomials
    return (
        pochhammer(k1 - n1, p)
        * pochhammer(-k1, i)
        * pochhammer(alpha1 + p + 1, n1 - k1 - p)
        * pochhammer(beta1 + i + 1, k1 - i)
        * pochhammer(gamma + n - i + 1, i)
        * pochhammer(gamma + n - i - p + 1, p)
        * Fraction(1, factorial(p) * factorial(i))
    )


def _second_coefficient(n2, k2, alpha2, beta2, gamma, n, p, i, h, s):
    return (
        pochhammer(k2 - n2, h)
        * pochhammer(-k2, s)
        * pochhammer(alpha2 + p + h + 1, n2 - k2 - h)
        * pochhammer(beta2 + i + s + 1, k2 - s)
        * pochhammer(gamma + n - p - i - s + 1, s)
        * pochhammer(gamma + n - p - i - h - s + 1, h)
        * Fraction(1, factorial(h) * factorial(s))
    )


def jp_poly_explicit(params: ParamSet, pairs: Sequence[IndexPair]) -> BaryPoly:
    """
    Two-measure polynomial from the closed-form coefficients

        c(l, m) = sum_{p, i} A(p, i) B(p, i, l - p, m - i)

    with A the seed coefficients of the first operator and B those of the
    second, both zero outside their index boxes.
    """
    if params.r != 2:
        raise PreconditionError(
            f"The closed form covers two measures, got r={params.r}"
        )
    _check_pairs(params, pairs)
    (alpha1, beta1), (alpha2, beta2) = params.measure(1), params.measure(2)
    gamma = params.gamma
    (n1, k1), (n2, k2) = (pairs[0].n, pairs[0].k), (pairs[1].n, pairs[1].k)
    n = n1 + n2
    seed = {
        (p, i): _seed_coefficient(n1, k1, alpha1, beta1, gamma, n, p, i)
        for p in range(n1 - k1 + 1)
        for i in range(k1 + 1)
    }
    coeffs: Dict[Key, Scalar] = {}
    for l in range(n - k1 - k2 + 1):
        for m in range(k1 + k2 + 1):
            total = 0
            for p in range(max(0, l - (n2 - k2)), min(l, n1 - k1) + 1):
                for i in range(max(0, m - k2), min(m, k1) + 1):
                    total += seed[(p, i)] * _second_coefficient(
                        n2, k2, alpha2, beta2, gamma, n, p, i, l - p, m - i
                    )
            coeffs[(l, m)] = total
    return BaryPoly(n, coeffs)


def univariate_jp(
    alphas: Sequence[Scalar], beta: Scalar, ns: Sequence[int]
) -> List[Scalar]:
    """
    Type II Jacobi-Pineiro polynomial on [0, 1] for the weights
    x^alphas[j] (1-x)^beta,

        (1-x)^-beta prod_j x^-alpha_j d^{n_j}/dx^{n_j} x^{n_j+alpha_j} (1-x)^{beta+|n|}

    the one-variable counterpart of `jp_poly_operator`.

    Returns:
    list: monomial coefficients, constant term first.
    """
    if len(alphas) != len(ns):
        raise PreconditionError(f"Got {len(ns)} indices for {len(alphas)} weights")
    if any(nj < 0 for nj in ns):
        raise PreconditionError(f"Indices must be nonnegative, got {list(ns)}")
    degree = sum(ns)
    # x^a (1-x)^(degree-a) -> coefficient
    terms: Dict[int, Scalar] = {0: beta * 0 + 1}
    for alpha, nj in zip(alphas, ns):
        nxt: Dict[int, Scalar] = {}
        for a, c in terms.items():
            b = degree - a
            for p in range(min(nj, b) + 1):
                coeff = comb(nj, p) * pochhammer(alpha + a + p + 1, nj - p)
                coeff *= pochhammer(beta + b - p + 1, p)
                if p % 2:
                    coeff = -coeff
                nxt[a + p] = nxt.get(a + p, 0) + c * coeff
        terms = nxt
    mono = [0] * (degree + 1)
    for a, c in terms.items():
        b = degree - a
        for t in range(b + 1):
            sign = -1 if t % 2 else 1
            mono[a + t] += sign * comb(b, t) * c
    return mono

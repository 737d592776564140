"""Scalars and the special functions the rest of the package is built on.

Two scalar modes are used throughout: exact rationals (`fractions.Fraction`)
for every identity that should hold with zero error, and plain floats for
the transcendental pieces (E_j, the hypergeometric terms, error grids).
"""
import enum
import logging
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Union

from scipy.special import gammaln

log = logging.getLogger(__name__)

Scalar = Union[Fraction, int, float]

DEFAULT_2F1_TOL = 1e-14
DEFAULT_2F1_MAX_TERMS = 10**6


class DomainError(ValueError):
    """Argument outside the domain of a special function or moment."""


class HypergeometricConvergenceError(ArithmeticError):
    """The 2F1 series did not meet its tolerance within the term cap."""


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def parse_scalar(text: Union[str, int, float, Fraction]) -> Scalar:
    """
    Parse a user supplied scalar.

    "3/2" and "-4" give exact rationals, "0.25" or "1e-3" give floats.
    Numbers coming from YAML are accepted as they are.

    Parameters:
    text (str | int | float | Fraction): value to parse.

    Returns:
    Fraction | float
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a number: {text!r}")
    if isinstance(text, Rational):
        return Fraction(text)
    if isinstance(text, float):
        return text
    raw = str(text).strip()
    if not raw:
        raise ValueError("Empty scalar")
    if "/" in raw:
        num, den = raw.split("/", 1)
        return Fraction(int(num.strip()), int(den.strip()))
    try:
        return Fraction(int(raw))
    except ValueError:
        return float(raw)


def mode_of(values: Iterable[Scalar]) -> Mode:
    """Return EXACT when every value is rational, FLOAT otherwise."""
    for value in values:
        if not isinstance(value, Rational):
            return Mode.FLOAT
    return Mode.EXACT


def format_scalar(value: Scalar) -> str:
    """Rationals as "p/q" (or "p"), floats as the shortest round-trip decimal."""
    if isinstance(value, Rational):
        return str(Fraction(value))
    return repr(float(value))


def pochhammer(a: Scalar, n: int) -> Scalar:
    """
    Rising factorial (a)_n = a (a+1) ... (a+n-1).

    Exact when `a` is rational.
    """
    if n < 0:
        raise DomainError(f"Pochhammer length must be nonnegative, got {n}")
    result = a * 0 + 1
    for s in range(n):
        result *= a + s
    return result


def pochhammer_table(a: Scalar, n_max: int) -> List[Scalar]:
    """[(a)_0, (a)_1, ..., (a)_{n_max}] built by the recurrence."""
    table = [a * 0 + 1]
    for s in range(n_max):
        table.append(table[-1] * (a + s))
    return table


def ln_gamma(x: Scalar) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if x <= 0:
        raise DomainError(f"ln_gamma needs x > 0, got {x}")
    return float(gammaln(float(x)))


def gamma_ratio(a: Scalar, b: Scalar) -> float:
    """Gamma(a) / Gamma(b) for positive a, b."""
    return math.exp(ln_gamma(a) - ln_gamma(b))


def gauss_2f1(
    a: Scalar,
    b: Scalar,
    c: Scalar,
    z: Scalar,
    tol: float = DEFAULT_2F1_TOL,
    max_terms: int = DEFAULT_2F1_MAX_TERMS,
) -> float:
    """
    Gauss hypergeometric series 2F1(a, b; c; z) for real |z| < 1.

    The partial sums stop once the tail bound |t_{k+1}| / (1 - q), where q is
    the larger of the current term ratio and |z|, drops below tol * |sum|.
    The bound is only trusted past the first max(|a|, |b|, |c|) terms, where
    the term ratios become monotone.

    Parameters
    ----------
    a, b, c : float
        Series parameters; c must not be a nonpositive integer.
    z : float
        Argument with |z| < 1.
    tol : float
        Relative tolerance on the tail.
    max_terms : int
        Cap on the number of terms.

    Returns
    -------
    float
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not abs(z) < 1:
        raise DomainError(f"2F1 series needs |z| < 1, got z={z}")
    if c <= 0 and c == int(c):
        raise DomainError(f"2F1 undefined for nonpositive integer c={c}")
    if z == 0:
        return 1.0

    total = 1.0
    term = 1.0
    trust_from = max(abs(a), abs(b), abs(c)) + 1
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        term *= ratio
        if term == 0.0:
            return total
        total += term
        if k >= trust_from:
            q = max(abs(ratio), abs(z))
            if q < 1:
                next_ratio = (a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2)) * z
                if abs(term * next_ratio) / (1 - q) <= tol * abs(total):
                    log.debug(f"2F1({a}, {b}; {c}; {z}) converged after {k + 2} terms")
                    return total
    raise HypergeometricConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not reach tol={tol} within {max_terms} terms"
    )

import random
from fractions import Fraction

import pytest

from trijp.rodrigues import IndexPair, ParamSet
from trijp.simplex_poly import BaryPoly

# monomial coefficients of the degree-4 two-measure example, keyed (z power, w power)
DEMO_MONOMIALS = {
    (0, 4): Fraction(1045, 12),
    (1, 3): Fraction(672),
    (2, 2): Fraction(2457, 2),
    (3, 1): Fraction(2200, 3),
    (4, 0): Fraction(455, 4),
    (0, 3): Fraction(-240),
    (1, 2): Fraction(-1274),
    (2, 1): Fraction(-1350),
    (3, 0): Fraction(-308),
    (0, 2): Fraction(455, 2),
    (1, 1): Fraction(700),
    (2, 0): Fraction(567, 2),
    (0, 1): Fraction(-250, 3),
    (1, 0): Fraction(-98),
    (0, 0): Fraction(35, 4),
}


def random_exponent(rng: random.Random) -> Fraction:
    """Rational > -1 with a small denominator."""
    den = rng.choice([1, 2, 3, 4, 5])
    return Fraction(rng.randint(1 - den, 4 * den), den)


def random_params(rng: random.Random, r: int) -> ParamSet:
    while True:
        alphas = [random_exponent(rng) for _ in range(r)]
        betas = [random_exponent(rng) for _ in range(r)]
        if len(set(zip(alphas, betas))) == r:
            return ParamSet(tuple(alphas), tuple(betas), random_exponent(rng))


def all_pairs(max_n: int):
    return [IndexPair(n, k) for n in range(max_n + 1) for k in range(n + 1)]


def pair_tuples(max_total: int):
    """Every (pair_1, pair_2) with n_1 + n_2 <= max_total."""
    pairs = all_pairs(max_total)
    return [(p, q) for p in pairs for q in pairs if p.n + q.n <= max_total]


def acceptance_param_sets(count: int = 10):
    """Seeded two-measure rational parameter sets for the full test matrix."""
    rng = random.Random(20231)
    return [random_params(rng, 2) for _ in range(count)]


def random_bary(rng: random.Random, degree: int) -> BaryPoly:
    coeffs = {}
    for l in range(degree + 1):
        for m in range(degree + 1 - l):
            if rng.random() < 0.6:
                coeffs[(l, m)] = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
    return BaryPoly(degree, coeffs)


def interior_point(rng: random.Random):
    """Rational point strictly inside the triangle."""
    den = rng.randint(3, 17)
    x = rng.randint(1, den - 2)
    y = rng.randint(1, den - 1 - x)
    return Fraction(x, den), Fraction(y, den)


@pytest.fixture
def demo_params():
    return ParamSet.parse(["0", "3/2"], ["1/2", "4/3"], "0")


@pytest.fixture
def demo_pairs():
    return [IndexPair(2, 1), IndexPair(2, 1)]


@pytest.fixture
def demo_monomials():
    return dict(DEMO_MONOMIALS)


@pytest.fixture
def rational_param_sets():
    return acceptance_param_sets(3)

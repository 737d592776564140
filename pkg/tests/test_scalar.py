import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import hyp2f1

from trijp.scalar import (
    DomainError,
    HypergeometricConvergenceError,
    Mode,
    format_scalar,
    gamma_ratio,
    gauss_2f1,
    ln_gamma,
    mode_of,
    parse_scalar,
    pochhammer,
    pochhammer_table,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3/2", Fraction(3, 2)),
        ("-4", Fraction(-4)),
        (" 1 / 3 ", Fraction(1, 3)),
        (2, Fraction(2)),
        (Fraction(4, 3), Fraction(4, 3)),
    ],
)
def test_parse_scalar_exact(text, expected):
    value = parse_scalar(text)
    assert value == expected
    assert isinstance(value, Fraction)


def test_parse_scalar_decimal_is_float():
    assert parse_scalar("0.25") == 0.25
    assert isinstance(parse_scalar("1e-3"), float)


@pytest.mark.parametrize("text", ["", "abc", True])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_mode_and_format():
    assert mode_of([Fraction(1, 2), 3]) is Mode.EXACT
    assert mode_of([Fraction(1, 2), 0.5]) is Mode.FLOAT
    assert format_scalar(Fraction(3, 2)) == "3/2"
    assert format_scalar(Fraction(-4)) == "-4"
    assert format_scalar(0.1) == "0.1"


def test_pochhammer():
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert isinstance(pochhammer(Fraction(1, 2), 0), Fraction)
    assert pochhammer(5, 0) == 1
    assert pochhammer(-2, 3) == 0
    expected = [1, Fraction(1, 2), Fraction(3, 4), Fraction(15, 8)]
    assert pochhammer_table(Fraction(1, 2), 3) == expected
    with pytest.raises(DomainError):
        pochhammer(1, -1)


@pytest.mark.parametrize("a", [Fraction(1, 2), Fraction(-7, 3), Fraction(5)], ids=str)
def test_pochhammer_splits_exactly(a):
    for m in range(21):
        for n in range(21):
            assert pochhammer(a, m + n) == pochhammer(a, m) * pochhammer(a + m, n)


def test_gamma_helpers():
    assert ln_gamma(5) == pytest.approx(math.log(24))
    assert gamma_ratio(5, 3) == pytest.approx(12)
    with pytest.raises(DomainError):
        ln_gamma(0)


def test_ln_gamma_recurrence():
    for x in np.linspace(0.5, 50, 100):
        expected = x * math.exp(ln_gamma(x))
        assert math.exp(ln_gamma(x + 1)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "a, b, c, z",
    [
        (1, 1, 2, 0.5),
        (1.5, 1, 4.8, 0.2),
        (2.5, 1, 3.1, -0.7),
        (0.5, 1, 2.5, 0.95),
        (4 / 3 + 1, 1, 0 + 4 / 3 + 1.5 + 3, 1 / 7),
    ],
)
def test_gauss_2f1_matches_scipy(a, b, c, z):
    assert gauss_2f1(a, b, c, z) == pytest.approx(hyp2f1(a, b, c, z), rel=1e-12)


def test_gauss_2f1_closed_form():
    # 2F1(1, 1; 2; z) = -log(1-z) / z
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-13)
    assert gauss_2f1(1, 1, 2, 0) == 1.0


@pytest.mark.parametrize("a", [0.5, 1.0, 2.5])
@pytest.mark.parametrize("z", [0.1, -0.1, 0.5, -0.5])
def test_gauss_2f1_binomial_case(a, z):
    # b = c leaves the binomial series of (1-z)^-a
    assert gauss_2f1(a, 3.5, 3.5, z) == pytest.approx((1 - z) ** -a, rel=1e-12)


def test_gauss_2f1_terminating_series():
    # a = -2 ends the series after three terms
    assert gauss_2f1(-2, 1, 1, 0.5) == pytest.approx((1 - 0.5) ** 2)


def test_gauss_2f1_domain():
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 2, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, -2, 0.5)


def test_gauss_2f1_term_cap():
    with pytest.raises(HypergeometricConvergenceError):
        gauss_2f1(1, 1, 2, 0.9, max_terms=3)

from fractions import Fraction

import numpy as np
import pytest

from tests.conftest import acceptance_param_sets, pair_tuples
from trijp.hermite_pade import (
    HermitePadeApproximant,
    NumeratorState,
    PoleError,
    E_truncated,
    approximant_eval,
    build_P01,
    build_P10,
    check_hp_conditions,
    expand_P01,
    fractional_coeff,
    phi,
    psi11,
    psi12,
    psi21,
    psi22,
    residual_order_check,
    series_coeff,
    series_table,
)
from trijp.quadrature import (
    E_direct,
    phi_direct,
    psi11_direct,
    psi12_direct,
    psi1_direct,
    psi21_direct,
    psi22_direct,
    psi2_direct,
    self_converge,
)
from trijp.rodrigues import IndexPair, ParamSet, PreconditionError, jp_poly_operator
from trijp.scalar import DomainError
from trijp.simplex_poly import MonoPoly, as_float, bary_to_mono, evaluate, perturb

POINTS = [(5.0, 7.0), (2.5, 9.0), (-4.0, 3.0), (12.0, -6.5)]


@pytest.fixture
def demo_A(demo_params, demo_pairs):
    return bary_to_mono(jp_poly_operator(demo_params, demo_pairs))


@pytest.fixture
def demo_states(demo_params, demo_A):
    return {j: NumeratorState.from_polynomial(demo_A, demo_params, j) for j in (1, 2)}


def test_series_coefficients(demo_params):
    assert series_coeff(demo_params, 1, 0, 0) == pytest.approx(4 / 15, rel=1e-14)
    table = series_table(demo_params, 2, 3, 4)
    assert table.shape == (4, 5)
    assert table[2, 3] == pytest.approx(series_coeff(demo_params, 2, 2, 3), rel=1e-13)
    with pytest.raises(DomainError):
        series_coeff(demo_params, 1, -1, 0)


@pytest.mark.parametrize("j", [1, 2])
def test_truncated_series_matches_quadrature(demo_params, j):
    z, w = 5.0, 7.0
    direct = E_direct(demo_params, j, z, w, q=64)
    assert E_truncated(demo_params, j, z, w, 60, 60) == pytest.approx(direct, rel=1e-12)
    with pytest.raises(DomainError):
        E_truncated(demo_params, j, 0.5, w, 10, 10)


def test_fractional_coefficients_of_example(demo_params, demo_pairs, demo_A):
    for j, pair in enumerate(demo_pairs, start=1):
        for l in range(5):
            for m in range(5):
                value = fractional_coeff(demo_A, demo_params, j, l, m)
                if l < pair.n - pair.k or m < pair.k:
                    assert value == 0
        assert fractional_coeff(demo_A, demo_params, j, 1, 1) != 0


def test_hp_conditions_example(demo_params, demo_pairs, demo_A):
    report = check_hp_conditions(demo_A, demo_params, demo_pairs)
    assert report.kind == "hermite_pade"
    assert report.passed
    order = residual_order_check(demo_A, demo_params, demo_pairs)
    assert order.passed
    for j in (1, 2):
        assert order.measures[j].corner == (1, 1)
        assert (1, 1) in order.measures[j].nonzero
    assert order.to_dict()["measures"][0]["expected_corner"] == [1, 1]


def test_hp_conditions_random_rational(rational_param_sets):
    for params in rational_param_sets[:2]:
        for p, q in pair_tuples(4):
            A = bary_to_mono(jp_poly_operator(params, [p, q]))
            report = check_hp_conditions(A, params, [p, q])
            assert report.passed, (params, p, q)


def test_hp_conditions_fail_after_perturbation(demo_params, demo_pairs):
    poly = perturb(jp_poly_operator(demo_params, demo_pairs), (0, 1), Fraction(1, 2))
    A = bary_to_mono(poly)
    assert not check_hp_conditions(A, demo_params, demo_pairs).passed
    assert not residual_order_check(A, demo_params, demo_pairs).passed


def test_build_P10_carries_weight_ratios(demo_params):
    A = MonoPoly(2, {(2, 0): 1})
    assert build_P10(A, demo_params, 1) == {(0, 0, 1): Fraction(1, 2), (1, 0, 0): 1}
    assert build_P10(A, demo_params, 1, literal=True) == {(0, 0, 1): 1, (1, 0, 0): 1}
    assert build_P10(MonoPoly(2, {(0, 2): 1}), demo_params, 1) == {}


def test_build_and_expand_P01(demo_params):
    A = MonoPoly(2, {(0, 2): 1})
    table = build_P01(A, demo_params, 1)
    assert table == {(0, 0, 1): Fraction(3, 5), (0, 1, 0): 1}
    b = expand_P01(table, A.degree)
    assert b.coeffs == {(0, 0): Fraction(3, 5), (0, 1): 1, (1, 0): Fraction(-3, 5)}


@pytest.mark.parametrize("z, w", POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_numerator_pieces_match_one_dimensional_quadrature(demo_states, j, z, w):
    state = demo_states[j]
    scale = abs(phi(state, z, w))
    pieces = [
        (psi11, psi11_direct),
        (psi12, psi12_direct),
        (psi21, psi21_direct),
        (psi22, psi22_direct),
    ]
    for closed, direct in pieces:
        expected = pytest.approx(direct(state, z, w), rel=1e-10, abs=1e-12 * scale)
        assert closed(state, z, w) == expected, closed.__name__


@pytest.mark.parametrize("z, w", POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_numerator_halves_match_triangle_quadrature(demo_states, j, z, w):
    state = demo_states[j]
    scale = abs(phi(state, z, w))
    first = psi11(state, z, w) + psi12(state, z, w)
    second = psi21(state, z, w) + psi22(state, z, w)
    assert first == pytest.approx(
        psi1_direct(state, z, w), rel=1e-9, abs=1e-11 * scale
    )
    assert second == pytest.approx(
        psi2_direct(state, z, w), rel=1e-9, abs=1e-11 * scale
    )


@pytest.mark.parametrize("z, w", POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_phi_matches_quadrature(demo_states, j, z, w):
    state = demo_states[j]
    value, _ = self_converge(
        lambda q: phi_direct(state, z, w, q), q_start=16, rtol=1e-12
    )
    assert phi(state, z, w) == pytest.approx(value, rel=1e-8)


def test_literal_tables_miss_the_integral(demo_params, demo_A, demo_states):
    z, w = 5.0, 7.0
    literal = NumeratorState.from_polynomial(demo_A, demo_params, 1, literal=True)
    target = psi1_direct(demo_states[1], z, w)
    value = psi11(literal, z, w) + psi12(literal, z, w)
    assert value != pytest.approx(target, rel=1e-6)


def test_literal_prefactor_only_changes_second_measure(demo_states):
    z, w = 5.0, 7.0
    first = demo_states[1]
    assert psi22(first, z, w, literal_prefactor=True) == psi22(first, z, w)
    assert psi22(demo_states[2], z, w, literal_prefactor=True) != pytest.approx(
        psi22(demo_states[2], z, w), rel=1e-6
    )


@pytest.mark.parametrize("z, w", POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_residual_identity(demo_params, demo_A, demo_states, j, z, w):
    """A E_j - Phi_j is the Laurent series with coefficients sum a_uv c_{l+u, m+v}."""
    L = 40
    A = as_float(demo_A)
    table = series_table(demo_params, j, L + A.degree, L + A.degree)
    coeffs = np.zeros((L + 1, L + 1))
    for (u, v), a in A:
        coeffs += a * table[u : u + L + 1, v : v + L + 1]
    zi = z ** -(np.arange(L + 1) + 1.0)
    wi = w ** -(np.arange(L + 1) + 1.0)
    series = float(zi @ coeffs @ wi)

    AE = float(evaluate(A, z, w)) * E_direct(demo_params, j, z, w, q=128)
    assert AE - phi(demo_states[j], z, w) == pytest.approx(series, abs=1e-9 * abs(AE))


def test_series_residual_starts_at_corner(demo_params, demo_A):
    # only l >= 1 and m >= 1 survive, so the leading term is c00 F_11 / (z w)^2
    table = series_table(demo_params, 1, 6, 6)
    A = as_float(demo_A)
    for l, m in [(0, 0), (0, 3), (2, 0)]:
        total = sum(a * table[l + u, m + v] for (u, v), a in A)
        assert abs(total) < 1e-12 * sum(abs(a) * table[l + u, m + v] for (u, v), a in A)


class TestApproximant:
    def test_close_to_transform_far_out(self, demo_params, demo_pairs):
        approximant = HermitePadeApproximant(demo_params, demo_pairs)
        for j in (1, 2):
            exact = E_direct(demo_params, j, 15.0, 15.0, q=64)
            assert approximant(j, 15.0, 15.0) == pytest.approx(exact, rel=1e-4)

    @pytest.mark.parametrize("j", [1, 2])
    def test_error_shrinks_along_diagonal(self, demo_params, demo_pairs, j):
        approximant = HermitePadeApproximant(demo_params, demo_pairs)
        errors = []
        for t in (2.0, 5.0, 10.0, 20.0):
            exact, _ = self_converge(
                lambda q: E_direct(demo_params, j, t, t, q), q_start=16, rtol=1e-12
            )
            errors.append(abs(approximant(j, t, t) - exact) / abs(exact))
        steps = zip(errors, errors[1:])
        assert all(later <= earlier for earlier, later in steps), errors
        assert errors[-1] <= errors[0] / 10
        if j == 1:
            assert errors[-1] <= 1e-3

    def test_approximant_eval(self, demo_params, demo_pairs):
        value = approximant_eval(demo_params, demo_pairs, 2, 6.0, 4.0)
        assert value == HermitePadeApproximant(demo_params, demo_pairs)(2, 6.0, 4.0)
        with pytest.raises(PreconditionError):
            approximant_eval(demo_params, demo_pairs, 3, 6.0, 4.0)

    def test_pole_at_vertex(self, demo_params, demo_pairs):
        approximant = HermitePadeApproximant(demo_params, demo_pairs)
        with pytest.raises(PoleError):
            approximant.denominator(1.0, 0.0)
        with pytest.raises(ZeroDivisionError):
            approximant.denominator(0.0, 1.0)

    def test_points_inside_unit_box_rejected(self, demo_states):
        with pytest.raises(DomainError):
            phi(demo_states[1], 0.5, 5.0)
        with pytest.raises(DomainError):
            psi12(demo_states[1], 5.0, 0.5)

    def test_trivial_polynomial(self):
        params = ParamSet.parse(["0"], ["0"], "0")
        approximant = HermitePadeApproximant(params, [IndexPair(0, 0)])
        # A = 1, so Phi vanishes and R is identically zero
        assert approximant.numerator(1, 3.0, 4.0) == 0.0
        assert approximant(1, 3.0, 4.0) == 0.0


GRID_POINTS = [(z, w) for z in (2.0, 5.0, 20.0) for w in (2.0, 5.0, 20.0)]


def converged(fn):
    value, _ = self_converge(fn, q_start=16, rtol=1e-10)
    return value


@pytest.mark.parametrize("z, w", GRID_POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_phi_on_grid(demo_states, j, z, w):
    state = demo_states[j]
    reference = converged(lambda q: phi_direct(state, z, w, q))
    assert phi(state, z, w) == pytest.approx(reference, rel=1e-8)


@pytest.mark.parametrize("z, w", GRID_POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_numerator_halves_on_grid(demo_states, j, z, w):
    state = demo_states[j]
    first = psi11(state, z, w) + psi12(state, z, w)
    second = psi21(state, z, w) + psi22(state, z, w)
    first_reference = converged(lambda q: psi1_direct(state, z, w, q))
    second_reference = converged(lambda q: psi2_direct(state, z, w, q))
    assert first == pytest.approx(first_reference, rel=1e-8)
    assert second == pytest.approx(second_reference, rel=1e-8)


@pytest.mark.parametrize("z, w", GRID_POINTS)
@pytest.mark.parametrize("j", [1, 2])
def test_phi_quadrature_stable_under_doubling(demo_states, j, z, w):
    coarse = phi_direct(demo_states[j], z, w, 64)
    fine = phi_direct(demo_states[j], z, w, 128)
    assert abs(coarse - fine) <= 1e-10 * abs(fine)


@pytest.mark.parametrize("z, w", [(5.0, 7.0), (2.0, 2.0), (3.0, 11.0), (-4.0, 6.0)])
def test_psi22_mirrors_psi12(z, w):
    # A symmetric in (z, w); swapping a_j and b_j exchanges the two 2F1 pieces
    coeffs = {(3, 0): 2, (2, 1): -1, (1, 1): 5, (1, 0): 3, (0, 0): -4}
    A = MonoPoly(3, {**coeffs, **{(v, u): a for (u, v), a in coeffs.items()}})
    params = ParamSet.parse(["1/2"], ["7/3"], "1")
    swapped = ParamSet.parse(["7/3"], ["1/2"], "1")
    state = NumeratorState.from_polynomial(A, params, 1)
    mirror = NumeratorState.from_polynomial(A, swapped, 1)
    assert psi22(mirror, w, z) == pytest.approx(psi12(state, z, w), rel=1e-10)
    assert psi22(state, z, w) == pytest.approx(psi12(mirror, w, z), rel=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("params", acceptance_param_sets(), ids=lambda p: str(p.alphas))
def test_hp_conditions_full_matrix(params):
    for p, q in pair_tuples(8):
        A = bary_to_mono(jp_poly_operator(params, [p, q]))
        assert check_hp_conditions(A, params, [p, q]).passed, (params, p, q)

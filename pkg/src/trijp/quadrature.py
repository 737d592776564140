"""Gauss-Jacobi quadrature oracles on [0, 1] and on the triangle.

These are independent numerical checks of the closed forms; the weight
singularities are absorbed into the rules, never sampled.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi

from trijp.hermite_pade import NumeratorState, eval_P01, eval_P10
from trijp.rodrigues import ParamSet
from trijp.scalar import DomainError, Scalar
from trijp.simplex_poly import as_float, evaluate

log = logging.getLogger(__name__)


class SingularityError(ValueError):
    """The evaluation point lies on the support of the integrand's poles."""


class QuadratureConvergenceError(RuntimeError):
    """q-doubling did not reach the requested agreement."""


def gauss_jacobi(q: int, a: Scalar, b: Scalar) -> Tuple[np.ndarray, np.ndarray]:
    """
    q-point Gauss rule on [0, 1] for the weight x^a (1-x)^b.

    Parameters:
    q (int): number of nodes.
    a, b (float): exponents, both > -1.

    Returns:
    tuple: (nodes, weights).
    """
    if q < 1:
        raise DomainError(f"Need at least one node, got q={q}")
    a, b = float(a), float(b)
    if a <= -1 or b <= -1:
        raise DomainError(f"Jacobi exponents must exceed -1, got ({a}, {b})")
    # scipy's weight is (1-t)^alpha (1+t)^beta on [-1, 1]
    t, wt = roots_jacobi(q, b, a)
    return (1 + t) / 2, wt / 2 ** (a + b + 1)


@dataclass(frozen=True)
class TriangleRule:
    """
    Tensor rule for int_T f x^alpha y^beta (1-x-y)^gamma, obtained from
    y = (1-x) t with a Gauss-Jacobi rule in x for x^alpha (1-x)^(beta+gamma+1)
    and one in t for t^beta (1-t)^gamma.
    """

    alpha: float
    beta: float
    gamma: float
    q: int
    x: np.ndarray
    y: np.ndarray
    weights: np.ndarray


def build_rule(alpha: Scalar, beta: Scalar, gamma: Scalar, q: int) -> TriangleRule:
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    xs, wx = gauss_jacobi(q, alpha, beta + gamma + 1)
    ts, wt = gauss_jacobi(q, beta, gamma)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    weights = np.outer(wx, wt)
    y = (1 - X) * T
    return TriangleRule(alpha, beta, gamma, q, X.ravel(), y.ravel(), weights.ravel())


def integrate(rule: TriangleRule, f: Callable) -> float:
    """Weighted sum of f over the rule's nodes; f must accept numpy arrays."""
    return float(np.sum(rule.weights * f(rule.x, rule.y)))


def measure_rule(params: ParamSet, j: int, q: int) -> TriangleRule:
    alpha, beta = params.measure(j)
    return build_rule(alpha, beta, params.gamma, q)


def _check_off_support(z, w):
    if 0 <= z <= 1 or 0 <= w <= 1:
        raise SingularityError(
            f"Integrand is singular for z or w in [0, 1], got ({z}, {w})"
        )


def E_direct(params: ParamSet, j: int, z: float, w: float, q: int = 64) -> float:
    """E_j(z, w) by direct quadrature of its defining integral."""
    z, w = float(z), float(w)
    _check_off_support(z, w)
    return integrate(measure_rule(params, j, q), lambda x, y: 1 / ((z - x) * (w - y)))


def phi_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    """Phi_j(z, w) by quadrature of (A(z, w) - A(x, y)) / ((z - x)(w - y))."""
    z, w = float(z), float(w)
    _check_off_support(z, w)
    A = as_float(state.A)
    top = float(evaluate(A, z, w))
    rule = measure_rule(state.params, state.j, q)
    return integrate(rule, lambda x, y: (top - evaluate(A, x, y)) / ((z - x) * (w - y)))


def psi1_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    """int_T (A(z, w) - A(x, w)) / ((z - x)(w - y)) dmu_j, matching psi11 + psi12."""
    z, w = float(z), float(w)
    _check_off_support(z, w)
    A = as_float(state.A)
    rule = measure_rule(state.params, state.j, q)
    return integrate(
        rule, lambda x, y: (evaluate(A, z, w) - evaluate(A, x, w)) / ((z - x) * (w - y))
    )


def psi2_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    """int_T (A(x, w) - A(x, y)) / ((z - x)(w - y)) dmu_j, matching psi21 + psi22."""
    z, w = float(z), float(w)
    _check_off_support(z, w)
    A = as_float(state.A)
    rule = measure_rule(state.params, state.j, q)
    return integrate(
        rule, lambda x, y: (evaluate(A, x, w) - evaluate(A, x, y)) / ((z - x) * (w - y))
    )


def _rule_10(state: NumeratorState, q: int):
    # y^beta (1-y)^(alpha+gamma+1) scaled by B(alpha+1, gamma+1)
    nodes, weights = gauss_jacobi(q, state.beta, state.alpha + state.gamma + 1)
    return nodes, weights * beta_fn(state.alpha + 1, state.gamma + 1)


def _rule_01(state: NumeratorState, q: int):
    # x^alpha (1-x)^(beta+gamma+1) scaled by B(beta+1, gamma+1)
    nodes, weights = gauss_jacobi(q, state.alpha, state.beta + state.gamma + 1)
    return nodes, weights * beta_fn(state.beta + 1, state.gamma + 1)


def psi11_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    z, w = float(z), float(w)
    y, wy = _rule_10(state, q)
    at_w = eval_P10(state.p10, z, w, w)
    return float(np.sum(wy * (eval_P10(state.p10, z, w, y) - at_w) / (w - y)))


def psi12_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    z, w = float(z), float(w)
    _check_off_support(z, w)
    y, wy = _rule_10(state, q)
    return eval_P10(state.p10, z, w, w) * float(np.sum(wy / (w - y)))


def psi21_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    z, w = float(z), float(w)
    x, wx = _rule_01(state, q)
    at_z = eval_P01(state.p01, z, w)
    return -float(np.sum(wx * (eval_P01(state.p01, x, w) - at_z) / (x - z)))


def psi22_direct(state: NumeratorState, z: float, w: float, q: int = 64) -> float:
    z, w = float(z), float(w)
    _check_off_support(z, w)
    x, wx = _rule_01(state, q)
    return eval_P01(state.p01, z, w) * float(np.sum(wx / (z - x)))


def self_converge(
    fn: Callable[[int], float],
    q_start: int = 16,
    rtol: float = 1e-10,
    q_max: int = 1024,
) -> Tuple[float, int]:
    """
    Double the node count until two successive values agree to `rtol`.

    Returns:
    tuple: (value at the larger node count, that node count).
    """
    q = q_start
    previous = fn(q)
    while 2 * q <= q_max:
        current = fn(2 * q)
        if abs(current - previous) <= rtol * abs(current):
            log.debug(f"Quadrature converged at q={2 * q}: {current!r}")
            return current, 2 * q
        previous = current
        q *= 2
    raise QuadratureConvergenceError(
        f"No agreement to rtol={rtol} up to q={q_max} nodes (last value {previous!r})"
    )

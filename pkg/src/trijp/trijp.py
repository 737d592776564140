"""Main module."""
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from trijp.config import ConfigError, RunConfig
from trijp.hermite_pade import (
    HermitePadeApproximant,
    PoleError,
    check_hp_conditions,
    residual_order_check,
)
from trijp.orthogonality import verify_orthogonality
from trijp.quadrature import E_direct, self_converge
from trijp.rodrigues import jp_poly_explicit, jp_poly_operator
from trijp.simplex_poly import (
    BaryPoly,
    bary_to_mono,
    format_bary,
    format_mono,
    perturb,
    to_dict,
)

log = logging.getLogger(__name__)

GRID_COLUMNS = ["z", "w", "E", "R", "abs_err", "rel_err"]


class CrossCheckError(RuntimeError):
    """Operator composition and closed form disagree."""


class VerificationError(RuntimeError):
    """An in-set residual does not vanish."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


def build_polynomial(config: RunConfig) -> BaryPoly:
    """The Rodrigues polynomial of the run, with the optional perturbation applied."""
    poly = jp_poly_operator(config.params, config.index_pairs)
    if config.perturb is not None:
        log.warning(f"Perturbing coefficient {config.perturb} by 1")
        try:
            poly = perturb(poly, config.perturb, 1)
        except ValueError as e:
            raise ConfigError(f"Cannot perturb: {e}") from e
    return poly


def run_poly(config: RunConfig, check_explicit: bool = False) -> str:
    """
    Build the polynomial and render it in both bases.

    Parameters:
    config (RunConfig): validated run configuration.
    check_explicit (bool): cross-check against the closed-form construction.

    Returns:
    str: text (or JSON) ready for stdout.
    """
    params, pairs = config.params, config.index_pairs
    poly = build_polynomial(config)
    if check_explicit:
        if params.r != 2:
            raise ConfigError(f"--check-explicit covers two measures, got {params.r}")
        explicit = jp_poly_explicit(params, pairs)
        if explicit != poly:
            diff = sorted(set(explicit.coeffs.items()) ^ set(poly.coeffs.items()))
            raise CrossCheckError(
                f"Closed form and operator composition differ at {diff[:5]}"
            )
        log.info("Closed form matches the operator composition")
    mono = bary_to_mono(poly)
    if config.format == "json":
        return json.dumps({"bary": to_dict(poly), "mono": to_dict(mono)}, indent=2)
    if poly.degree == 0:
        return format_mono(mono)
    return f"P(x,y) = {format_bary(poly)}\nP(z,w) = {format_mono(mono)}"


def run_verify(config: RunConfig) -> dict:
    """
    Orthogonality and Hermite-Pade vanishing conditions up to max_degree.

    Raises VerificationError, carrying the report, when either check fails.
    """
    params, pairs = config.params, config.index_pairs
    poly = build_polynomial(config)
    mono = bary_to_mono(poly)
    degree, tol = config.max_degree, config.verify_tol
    orth = verify_orthogonality(params, pairs, degree, tol, poly=poly)
    hp = check_hp_conditions(mono, params, pairs, degree, tol)
    order = residual_order_check(mono, params, pairs, degree, tol)
    report = {
        "pass": orth.passed and hp.passed,
        "orthogonality": orth.to_dict(),
        "hermite_pade": hp.to_dict(),
        "residual_order": order.to_dict(),
    }
    if not report["pass"]:
        failures = orth.failures() + hp.failures()
        where = ", ".join(f"measure {j} at ({e.l}, {e.m})" for j, e in failures[:5])
        raise VerificationError(f"Nonzero in-set residuals: {where}", report)
    return report


def converged_nodes(config: RunConfig, j: int, z: float, w: float) -> int:
    """Node count at which E_j(z, w) is stable under q-doubling."""
    params = config.params
    _, q = self_converge(
        lambda q: E_direct(params, j, z, w, q),
        q_start=config.quad_nodes,
        rtol=config.quad_rtol,
        q_max=config.max_quad_nodes,
    )
    return q


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def run_approx(config: RunConfig, z: float, w: float) -> dict:
    """P, Phi_j, R_j, the quadrature value of E_j and the relative errors at (z, w)."""
    config.check_point(z, w)
    params = config.params
    approximant = HermitePadeApproximant(
        params,
        config.index_pairs,
        poly=build_polynomial(config),
        tol=config.tol,
        threshold=config.pole_threshold,
    )
    out: Dict[str, float] = {
        "z": float(z),
        "w": float(w),
        "P": approximant.denominator(z, w),
    }
    for j in range(1, params.r + 1):
        out[f"phi_{j}"] = approximant.numerator(j, z, w)
    for j in range(1, params.r + 1):
        out[f"R_{j}"] = out[f"phi_{j}"] / out["P"]
    for j in range(1, params.r + 1):
        q = converged_nodes(config, j, z, w)
        out[f"E_{j}"] = E_direct(params, j, z, w, q)
    for j in range(1, params.r + 1):
        out[f"rel_err_{j}"] = _relative(out[f"R_{j}"], out[f"E_{j}"])
    return out


def grid_axes(config: RunConfig) -> Tuple[np.ndarray, np.ndarray]:
    grid = config.grid
    return (
        np.linspace(grid.z_min, grid.z_max, grid.steps),
        np.linspace(grid.w_min, grid.w_max, grid.steps),
    )


def grid_frame(
    config: RunConfig, approximant: HermitePadeApproximant, j: int
) -> pd.DataFrame:
    """
    Error table for measure j, one row per grid point, w-major. Pole cells
    carry NaN in R and in both errors.
    """
    zs, ws = grid_axes(config)
    if len(zs) == 0:
        return pd.DataFrame(columns=GRID_COLUMNS)
    q = converged_nodes(config, j, zs.min(), ws.min())
    log.info(f"Measure {j}: E_j oracle uses q={q} nodes")
    rows = []
    for w in ws:
        for z in zs:
            exact = E_direct(config.params, j, z, w, q)
            try:
                value = approximant(j, z, w)
            except PoleError:
                log.debug(f"Pole cell at ({z}, {w})")
                value = math.nan
            error = abs(value - exact)
            rows.append((z, w, exact, value, error, error / abs(exact)))
    return pd.DataFrame(rows, columns=GRID_COLUMNS)


def write_frame(frame: pd.DataFrame, path: Path, fmt: str):
    if fmt == "csv":
        frame.to_csv(path, index=False)
    else:
        cells = frame.astype(object).where(frame.notna(), None)
        records = cells.to_dict(orient="records")
        with open(path, "w") as file:
            json.dump(records, file)


def run_grid(config: RunConfig) -> List[Path]:
    """Write one error table per measure to <out>_m<j>.<format>."""
    params = config.params
    approximant = HermitePadeApproximant(
        params,
        config.index_pairs,
        poly=build_polynomial(config),
        tol=config.tol,
        threshold=config.pole_threshold,
    )
    prefix = config.out or "trijp_grid"
    paths = []
    for j in range(1, params.r + 1):
        frame = grid_frame(config, approximant, j)
        path = Path(f"{prefix}_m{j}.{config.format}")
        path.parent.mkdir(parents=True, exist_ok=True)
        write_frame(frame, path, config.format)
        log.info(f"Wrote {len(frame)} rows to {path}")
        paths.append(path)
    return paths

"""Console script for trijp."""
import json
import logging
import sys
from contextlib import contextmanager

import click

import trijp
from trijp.config import ConfigError, build_config
from trijp.hermite_pade import PoleError
from trijp.quadrature import QuadratureConvergenceError, SingularityError
from trijp.rodrigues import PreconditionError
from trijp.scalar import DomainError, HypergeometricConvergenceError
from trijp.simplex_poly import DegreeMismatchError
from trijp.trijp import (
    CrossCheckError,
    VerificationError,
    run_approx,
    run_grid,
    run_poly,
    run_verify,
)

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])

log_format = "%(levelname)-8s %(asctime)s   %(message)s"
date_format = "%d/%m %H:%M:%S"


class CrossCheckFailed(click.ClickException):
    exit_code = 3


class VerificationFailed(click.ClickException):
    exit_code = 4


class ConvergenceFailed(click.ClickException):
    exit_code = 5


class PoleHit(click.ClickException):
    exit_code = 6


@contextmanager
def exit_codes():
    """Translate library errors into click exceptions with their exit codes."""
    try:
        yield
    except (
        ConfigError,
        PreconditionError,
        DegreeMismatchError,
        DomainError,
        SingularityError,
    ) as e:
        raise click.UsageError(str(e))
    except CrossCheckError as e:
        raise CrossCheckFailed(str(e))
    except VerificationError as e:
        raise VerificationFailed(str(e))
    except (HypergeometricConvergenceError, QuadratureConvergenceError) as e:
        raise ConvergenceFailed(str(e))
    except PoleError as e:
        raise PoleHit(str(e))


def emit(text: str, out=None):
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as file:
            file.write(text + "\n")
        logging.info(f"Wrote {out}")


def run_options(func):
    """Options shared by every command."""
    options = [
        click.option(
            "--alphas", help="Comma separated alpha_j, e.g. '0,3/2'. (DEFAULT: 0,3/2)"
        ),
        click.option(
            "--betas", help="Comma separated beta_j, e.g. '1/2,4/3'. (DEFAULT: 1/2,4/3)"
        ),
        click.option("--gamma", help="Shared exponent of (1-x-y). (DEFAULT: 0)"),
        click.option("--pairs", help="Index pairs n:k per measure, e.g. '2:1,2:1'."),
        click.option(
            "--max-degree",
            type=int,
            help="Highest total degree checked. (DEFAULT: sum n_j + 2)",
        ),
        click.option(
            "--quad-nodes",
            type=int,
            help="Starting Gauss-Jacobi nodes per axis. (DEFAULT: 64)",
        ),
        click.option(
            "--tol",
            type=float,
            help="Relative tolerance of the 2F1 series. (DEFAULT: 1e-14)",
        ),
        click.option(
            "--perturb", help="Add 1 to the barycentric coefficient l:m of P."
        ),
        click.option(
            "-c",
            "--config",
            "config_file",
            type=click.Path(exists=True, dir_okay=False),
            help="YAML or JSON file with run settings; flags override it.",
        ),
        click.option(
            "-o", "--out", help="Output path (or prefix for grid). (DEFAULT: stdout)"
        ),
        click.option(
            "--format", type=click.Choice(["csv", "json"]), help="Output format."
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config(kwargs):
    with exit_codes():
        return build_config(**kwargs)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(version=trijp.__version__, prog_name="trijp")
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages to stderr.")
def main(verbose):
    """
    Jacobi-Pineiro multiple orthogonal polynomials on the triangle and their
    Hermite-Pade approximants.
    """
    logging.basicConfig(
        format=log_format,
        datefmt=date_format,
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        force=True,
    )


@main.command()
@run_options
@click.option(
    "--check-explicit",
    is_flag=True,
    help="Cross-check against the closed form (two measures).",
)
def poly(check_explicit, **kwargs):
    """
    Print the polynomial in barycentric and monomial form.
    """
    config = _config(kwargs)
    with exit_codes():
        text = run_poly(config, check_explicit=check_explicit)
    emit(text, config.out)


@main.command()
@run_options
@click.option(
    "--verify-tol",
    type=float,
    help="Relative tolerance for float-mode residuals. (DEFAULT: 1e-10)",
)
def verify(**kwargs):
    """
    Check orthogonality and the Hermite-Pade vanishing conditions exactly.
    """
    config = _config(kwargs)
    with exit_codes():
        try:
            report = run_verify(config)
        except VerificationError as e:
            emit(json.dumps(e.report, indent=2), config.out)
            raise
    emit(json.dumps(report, indent=2), config.out)


@main.command()
@run_options
@click.option("--z-min", type=float, help="Lower z bound. (DEFAULT: 2)")
@click.option("--z-max", type=float, help="Upper z bound. (DEFAULT: 20)")
@click.option("--w-min", type=float, help="Lower w bound. (DEFAULT: 2)")
@click.option("--w-max", type=float, help="Upper w bound. (DEFAULT: 20)")
@click.option("--steps", type=int, help="Points per axis. (DEFAULT: 46)")
def grid(**kwargs):
    """
    Tabulate |R_j - E_j| over a (z, w) grid, one file per measure.
    """
    config = _config(kwargs)
    with exit_codes():
        paths = run_grid(config)
    for path in paths:
        click.echo(str(path))


@main.command()
@run_options
@click.option("--z", "z", type=float, required=True, help="Evaluation point z.")
@click.option("--w", "w", type=float, required=True, help="Evaluation point w.")
def approx(z, w, **kwargs):
    """
    Evaluate P, Phi_j and R_j at one point and compare with quadrature.
    """
    config = _config(kwargs)
    with exit_codes():
        values = run_approx(config, z, w)
    emit(json.dumps(values, indent=2), config.out)


if __name__ == "__main__":
    sys.exit(main())  # pragma: no cover

######################################################################
# Copyright 2016, 2024 John J. Rofrano. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
######################################################################

"""
Flask CLI Command Extensions

Subcommands of the ``flask`` / ``discmeans`` command line:

    verify        identity suites over a grid of fields, points and radii
    converge      residual of one identity across quadrature resolutions
    characterize  inverse residuals and the sign certificate for a domain file
    recover       fit a disc to a domain file by residual minimization

Data rows go to stdout (or --out), logs go to stderr. The exit status
follows common.status.
"""
import math

import click
from flask import current_app as app
from flask.cli import with_appcontext

from discmeans import characterize, suites
from discmeans.fields import parse_field_descriptor, radial_panharmonic
from discmeans.geometry import load_domain
from discmeans.models import CSV_COLUMNS, Conclusion, DataValidationError, Point, QuadratureSpec, ThresholdPolicy
from discmeans.common import reports, status
from discmeans.common.error_handlers import handle_errors

RECOVERY_COLUMNS = ["center_x1", "center_x2", "radius", "final_residual", "iterations", "evaluations", "converged"]

CONCLUSION_EXIT_CODES = {
    Conclusion.CONSISTENT_WITH_DISC: status.EXIT_OK,
    Conclusion.NOT_A_DISC: status.EXIT_NOT_A_DISC,
    Conclusion.INCONCLUSIVE: status.EXIT_INCONCLUSIVE,
}

POSITIVE = click.FloatRange(min=0.0, min_open=True)


######################################################################
#  S H A R E D   O P T I O N S
######################################################################
def quadrature_options(command):
    """--ntheta, --panels, --order, --grading; unset values come from the app config"""
    for option in reversed(
        [
            click.option("--ntheta", type=int, default=None, help="Angular trapezoidal nodes (even, >= 16)"),
            click.option("--panels", type=int, default=None, help="Graded radial panels"),
            click.option("--order", type=int, default=None, help="Gauss-Legendre points per radial panel"),
            click.option("--grading", type=float, default=None, help="Panel ratio toward the singular center"),
        ]
    ):
        command = option(command)
    return command


def output_options(command):
    """--format and --out"""
    command = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Output file")(
        command
    )
    return click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default=None)(command)


def quadrature_spec(ntheta, panels, order, grading) -> QuadratureSpec:
    """Builds the QuadratureSpec for a run from flags and configuration"""
    config = app.config
    return QuadratureSpec(
        n_theta=config["DEFAULT_NTHETA"] if ntheta is None else ntheta,
        n_radial_panels=config["DEFAULT_PANELS"] if panels is None else panels,
        radial_order=config["DEFAULT_ORDER"] if order is None else order,
        grading=config["DEFAULT_GRADING"] if grading is None else grading,
    )


def emit(records: list, columns: list, output_format: str, out: str):
    """Writes the run's records in the requested format"""
    reports.write_report(records, columns, output_format or app.config["OUTPUT_FORMAT"], out)


def _point(x, y):
    if (x is None) != (y is None):
        raise DataValidationError("--x and --y must be given together")
    return None if x is None else Point(x, y)


######################################################################
# Verify the identity suites
# Usage:
#   flask verify --identity weighted-mhh --mu 2 --r 1
######################################################################
@click.command("verify")
@click.option("--identity", "identities", multiple=True, type=click.Choice(suites.IDENTITY_NAMES))
@click.option("--field", "fields", multiple=True, help="Field descriptor, e.g. plane-mhh:mu=2,theta=0.3")
@click.option("--mu", type=POSITIVE, default=None, help="Panharmonic frequency of the default families")
@click.option("--lambda", "lam", type=POSITIVE, default=None, help="Helmholtz frequency of the default families")
@click.option("--r", "radius", type=POSITIVE, default=None, help="Disc radius")
@click.option("--x", type=float, default=None)
@click.option("--y", type=float, default=None)
@click.option("--seed", type=int, default=None, help="Seed of the field spot checks")
@quadrature_options
@output_options
@with_appcontext
@handle_errors
def verify(identities, fields, mu, lam, radius, x, y, seed, ntheta, panels, order, grading, output_format, out):
    """Checks the mean value identities to near machine precision"""
    spec = quadrature_spec(ntheta, panels, order, grading)
    parsed = [parse_field_descriptor(text) for text in fields]
    center = _point(x, y)
    rows = suites.run_identity_suite(
        spec,
        identities=identities or suites.IDENTITY_NAMES,
        fields=parsed or None,
        radii=(radius,) if radius else suites.SUITE_RADII,
        centers=(center,) if center else suites.SUITE_CENTERS,
        mu_values=(mu,) if mu else suites.SUITE_MU,
        lambda_values=(lam,) if lam else None,
    )
    rows += suites.field_spot_checks(app.config["DEFAULT_SEED"] if seed is None else seed, tuple(fields) or None)
    emit([row.serialize() for row in rows], suites.IDENTITY_COLUMNS, output_format, out)
    failed = [row for row in rows if not row.passed]
    for row in failed:
        app.logger.warning(
            "%s failed for %s at %r, r=%g: relative %.3e", row.identity, row.field, row.x, row.r, row.relative
        )
    raise click.exceptions.Exit(status.EXIT_TOLERANCE_FAILURE if failed else status.EXIT_OK)


######################################################################
# Quadrature convergence study
# Usage:
#   flask converge --identity weighted-mhh --mu 2 --r 1
######################################################################
@click.command("converge")
@click.option("--identity", type=click.Choice(suites.IDENTITY_NAMES), default="weighted-mhh")
@click.option("--field", "field_descriptor", default=None, help="Field descriptor (default plane-mhh at --mu)")
@click.option("--mu", type=POSITIVE, default=2.0)
@click.option("--r", "radius", type=POSITIVE, default=1.0)
@click.option("--x", type=float, default=0.0)
@click.option("--y", type=float, default=0.0)
@quadrature_options
@output_options
@with_appcontext
@handle_errors
def converge(identity, field_descriptor, mu, radius, x, y, ntheta, panels, order, grading, output_format, out):
    """Sweeps n_theta and radial order and reports the identity residual per cell"""
    base = quadrature_spec(ntheta, panels, order, grading)
    v = parse_field_descriptor(field_descriptor) if field_descriptor else suites.panharmonic_family(mu)[0]
    rows = suites.run_convergence(identity, v, Point(x, y), radius, base)
    emit([row.serialize() for row in rows], suites.CONVERGE_COLUMNS, output_format, out)
    if not suites.is_monotone_to_floor(rows):
        app.logger.warning("Residuals of %s do not decrease monotonically to the floor", identity)
    if not suites.convergence_reached(rows):
        app.logger.warning("Finest residual %.3e misses %.1e", rows[-1].residual, suites.CONVERGE_TARGET)
        raise click.exceptions.Exit(status.EXIT_TOLERANCE_FAILURE)
    raise click.exceptions.Exit(status.EXIT_OK)


######################################################################
# Disc characterization of a domain file
# Usage:
#   flask characterize --domain square.json --equal-area --mu 1
######################################################################
@click.command("characterize")
@click.option("--domain", "domain_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mu", type=POSITIVE, default=1.0)
@click.option("--r", "radius", type=POSITIVE, default=None, help="Disc radius to test against")
@click.option("--equal-area", is_flag=True, help="Use r = sqrt(|Omega| / pi)")
@click.option("--field", "fields", multiple=True, help="Positive panharmonic fields for the residual (default V)")
@click.option("--threshold", type=POSITIVE, default=None, help="Absolute certificate threshold")
@quadrature_options
@output_options
@with_appcontext
@handle_errors
def characterize_domain(
    domain_path, mu, radius, equal_area, fields, threshold, ntheta, panels, order, grading, output_format, out
):
    """Residuals of the inverse identities plus the strict-sign certificate"""
    spec = quadrature_spec(ntheta, panels, order, grading)
    omega = load_domain(domain_path)
    area = omega.area()
    if equal_area == (radius is not None):
        raise DataValidationError("Give exactly one of --r and --equal-area")
    r = math.sqrt(area / math.pi) if equal_area else radius
    x0 = omega.anchor
    policy = ThresholdPolicy(
        absolute=app.config["CERTIFICATE_ABSOLUTE_THRESHOLD"] if threshold is None else threshold,
        floor_factor=app.config["CERTIFICATE_FLOOR_FACTOR"],
    )
    candidates = [parse_field_descriptor(text) for text in fields] or [radial_panharmonic(mu, x0)]
    residuals = [characterize.residual_t4(omega, x0, r, mu, v, spec) for v in candidates]
    residuals.append(characterize.residual_t5(omega, x0, r, spec))
    if equal_area:
        residuals += [characterize.residual_t2(omega, x0, r, mu, v, spec) for v in candidates]
    certificate = characterize.sign_certificate(omega, x0, r, mu, spec, policy)
    emit([report.serialize() for report in residuals] + [certificate.serialize()], CSV_COLUMNS, output_format, out)
    raise click.exceptions.Exit(CONCLUSION_EXIT_CODES[certificate.conclusion])


######################################################################
# Disc recovery from a domain file
# Usage:
#   flask recover --domain disc.json --mu 1
######################################################################
@click.command("recover")
@click.option("--domain", "domain_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mu", type=POSITIVE, default=1.0)
@click.option("--field", "fields", multiple=True, help="Positive panharmonic fields (default V and plane waves)")
@click.option("--center-x", type=float, default=None)
@click.option("--center-y", type=float, default=None)
@click.option("--init-r", type=POSITIVE, default=None)
@click.option("--max-iter", type=click.IntRange(min=1), default=None)
@quadrature_options
@output_options
@with_appcontext
@handle_errors
def recover(
    domain_path, mu, fields, center_x, center_y, init_r, max_iter, ntheta, panels, order, grading, output_format, out
):
    """Fits a center and radius so the weighted identities hold"""
    spec = quadrature_spec(ntheta, panels, order, grading)
    omega = load_domain(domain_path)
    center = _point(center_x, center_y) or omega.anchor
    init = (center, init_r or math.sqrt(omega.area() / math.pi))
    result = characterize.recover_disc(
        omega,
        mu,
        field_family=[parse_field_descriptor(text) for text in fields] or None,
        spec=spec,
        init=init,
        max_iter=app.config["RECOVERY_MAX_ITER"] if max_iter is None else max_iter,
        xatol=app.config["RECOVERY_XATOL"],
    )
    emit([result.serialize()], RECOVERY_COLUMNS, output_format, out)
    app.logger.info(
        "Recovered center %r radius %.12g residual %.3e in %d iterations",
        result.center,
        result.radius,
        result.final_residual,
        result.iterations,
    )
    raise click.exceptions.Exit(status.EXIT_OK if result.converged else status.EXIT_NONCONVERGENCE)


COMMANDS = (verify, converge, characterize_domain, recover)


def init_app(app_):
    """Registers the commands on the application's CLI group"""
    for command in COMMANDS:
        app_.cli.add_command(command)

"""
Identity suites

Builds the grids of (identity, field, point, radius, frequency) checked by the
``verify`` command and the resolution sweep of the ``converge`` command. Rows
come out in a fixed order so repeated runs emit identical reports.
"""

import logging
import math
from dataclasses import dataclass

from discmeans import quadrature
from discmeans.fields import (
    FieldKind,
    ScalarField,
    check_field,
    harmonic_poly,
    parse_field_descriptor,
    plane_helmholtz,
    plane_panharmonic,
    quadratic_nonsolution,
    radial_helmholtz,
    radial_panharmonic,
    separable_panharmonic,
)
from discmeans.models import DataValidationError, Point, QuadratureSpec
from discmeans.specfun import (
    coeff_a,
    coeff_a_bullet,
    coeff_a_bullet_helmholtz,
    coeff_a_circ,
    coeff_a_circ_helmholtz,
    coeff_a_tilde,
)

logger = logging.getLogger(__name__)

IDENTITY_COLUMNS = [
    "identity", "field", "x1", "x2", "r", "frequency", "lhs", "rhs", "residual", "relative", "tolerance", "passed",
]
CONVERGE_COLUMNS = ["identity", "field", "n_theta", "radial_order", "residual"]

SUITE_CENTERS = (Point(0.0, 0.0), Point(0.5, -0.3), Point(-0.4, 0.6))
SUITE_RADII = (0.25, 0.5, 1.0)
SUITE_MU = (0.5, 1.0, 2.0, 4.0)
HELMHOLTZ_T = (0.5, 1.0, 2.0, 5.0)
HELMHOLTZ_RADII = (0.5, 1.0)
HARMONIC_MAX_K = 6
MAX_SUITE_T = 12.0
GREEN_CASES = (
    (Point(0.0, 0.0), 1.0),
    (Point(0.3, -0.2), 0.5),
    (Point(-0.5, 0.4), 0.75),
    (Point(1.0, 1.0), 0.25),
    (Point(0.2, 0.7), 1.5),
)

CONVERGE_NTHETA = (16, 32, 64, 128, 256, 512)
CONVERGE_ORDERS = (4, 8, 16, 32)
CONVERGE_TARGET = 1e-10


@dataclass(frozen=True)
class IdentityRow:
    """One checked identity: coefficient side, mean side and the verdict"""

    identity: str
    field: str
    x: Point
    r: float
    frequency: float
    lhs: float
    rhs: float
    tolerance: float
    scale: float = 1.0

    @property
    def residual(self) -> float:
        """rhs - lhs"""
        return self.rhs - self.lhs

    @property
    def relative(self) -> float:
        """|residual| / scale, the quantity compared with the tolerance"""
        return abs(self.residual) / self.scale

    @property
    def passed(self) -> bool:
        """True when the residual is within tolerance"""
        return self.relative <= self.tolerance

    def serialize(self) -> dict:
        """Serializes an IdentityRow into a flat dictionary"""
        return {
            "identity": self.identity,
            "field": self.field,
            "x1": self.x.x1,
            "x2": self.x.x2,
            "r": self.r,
            "frequency": self.frequency,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "relative": self.relative,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class CorollaryRow(IdentityRow):
    """Strict inequality row: passes when rhs - lhs clears the margin"""

    margin: float = 0.0

    @property
    def passed(self) -> bool:
        return self.residual > 0.0 and self.residual >= self.margin - self.tolerance


######################################################################
#  I D E N T I T I E S
######################################################################
# identity name -> (required field kind, coefficient, mean operation, tolerance, scale floor)
IDENTITIES = {
    "circle-mhh": (FieldKind.PANHARMONIC, coeff_a_circ, quadrature.circle_mean, 1e-9, 0.0),
    "disc-mhh": (FieldKind.PANHARMONIC, coeff_a_bullet, quadrature.disc_mean, 1e-9, 0.0),
    "weighted-mhh": (FieldKind.PANHARMONIC, coeff_a, quadrature.weighted_disc_mean, 1e-7, 0.0),
    "weighted-harm": (FieldKind.HARMONIC, lambda t: 0.5, quadrature.weighted_disc_mean, 1e-9, 1.0),
    "circle-hh": (FieldKind.HELMHOLTZ, coeff_a_circ_helmholtz, quadrature.circle_mean, 1e-9, 1.0),
    "disc-hh": (FieldKind.HELMHOLTZ, coeff_a_bullet_helmholtz, quadrature.disc_mean, 1e-9, 1.0),
    "weighted-hh": (FieldKind.HELMHOLTZ, coeff_a_tilde, quadrature.weighted_disc_mean, 1e-7, 1.0),
}
SPECIAL_IDENTITIES = ("corollary-mhh", "green")
IDENTITY_NAMES = tuple(IDENTITIES) + SPECIAL_IDENTITIES


def check_identity(identity: str, v: ScalarField, x: Point, r: float, spec: QuadratureSpec) -> IdentityRow:
    """Evaluates one identity row for a field, point and radius"""
    if identity == "green":
        residual = quadrature.green_identity_residual(v, x, r, spec)
        return IdentityRow("green", v.descriptor, x, r, v.frequency, 0.0, residual, 1e-9)
    if identity == "corollary-mhh":
        if not v.positive or v.kind is not FieldKind.PANHARMONIC:
            raise DataValidationError(f"corollary-mhh needs a positive panharmonic field, got {v!r}")
        value = v.at(x)
        mean = quadrature.weighted_disc_mean(v, x, r, spec).value
        margin = (coeff_a(v.frequency * r) - 0.5) * value
        return CorollaryRow("corollary-mhh", v.descriptor, x, r, v.frequency, 0.5 * value, mean, 1e-7, margin=margin)
    try:
        kind, coefficient, mean_of, tolerance, scale_floor = IDENTITIES[identity]
    except KeyError as error:
        raise DataValidationError(f"Unknown identity: {identity!r}") from error
    if v.kind is not kind:
        raise DataValidationError(f"Identity {identity} needs a {kind.value} field, got {v!r}")
    value = v.at(x)
    if kind is FieldKind.HARMONIC and v.descriptor == "harm-poly:k=0,part=re":
        tolerance = 1e-12
    lhs = coefficient(v.frequency * r) * value
    rhs = mean_of(v, x, r, spec).value
    scale = max(abs(value), scale_floor, 1e-300)
    return IdentityRow(identity, v.descriptor, x, r, v.frequency, lhs, rhs, tolerance, scale)


######################################################################
#  D E F A U L T   G R I D S
######################################################################
def panharmonic_family(mu: float) -> list:
    """The three positive panharmonic families used by the suites"""
    return [
        plane_panharmonic(mu, 0.3),
        radial_panharmonic(mu, Point(0.2, -0.1)),
        separable_panharmonic(mu * math.cos(0.7), mu * math.sin(0.7)),
    ]


def helmholtz_family(lam: float) -> list:
    """Plane and radial Helmholtz solutions"""
    return [plane_helmholtz(lam, 0.4), radial_helmholtz(lam, Point(0.1, 0.2))]


def _cases(identity: str, fields: list, radii: tuple, centers: tuple, mu_values: tuple, lambda_values: tuple):
    """(field, x, r) triples for a named identity, default families unless fields is given"""
    if identity not in IDENTITY_NAMES:
        raise DataValidationError(f"Unknown identity: {identity!r}")
    if fields:
        cases = GREEN_CASES if identity == "green" else [(x, r) for x in centers for r in radii]
        for v in fields:
            if identity == "green" or _accepts(identity, v):
                for x, r in cases:
                    yield v, x, r
    elif identity in ("circle-mhh", "disc-mhh", "weighted-mhh", "corollary-mhh"):
        for mu in mu_values:
            for v in panharmonic_family(mu):
                for x in centers:
                    for r in radii:
                        if mu * r <= MAX_SUITE_T:
                            yield v, x, r
    elif identity in ("circle-hh", "disc-hh", "weighted-hh") and lambda_values:
        for lam in lambda_values:
            for u in helmholtz_family(lam):
                for x in centers:
                    for r in radii:
                        if lam * r <= MAX_SUITE_T:
                            yield u, x, r
    elif identity in ("circle-hh", "disc-hh", "weighted-hh"):
        for r in HELMHOLTZ_RADII:
            for t in HELMHOLTZ_T:
                for u in helmholtz_family(t / r):
                    for x in centers:
                        yield u, x, r
    elif identity == "weighted-harm":
        for v in [harmonic_poly(k, part) for k in range(HARMONIC_MAX_K + 1) for part in ("re", "im")]:
            for x in centers:
                for r in radii:
                    yield v, x, r
    else:
        for w in [quadratic_nonsolution(), harmonic_poly(4, "re"), plane_panharmonic(1.0, 0.0)]:
            for x, r in GREEN_CASES:
                yield w, x, r


def run_identity_suite(
    spec: QuadratureSpec,
    identities: tuple = IDENTITY_NAMES,
    fields: list = None,
    radii: tuple = SUITE_RADII,
    centers: tuple = SUITE_CENTERS,
    mu_values: tuple = SUITE_MU,
    lambda_values: tuple = None,
) -> list:
    """Checks every requested identity over the grid and returns the rows in order

    fields, when given, replaces the default families (e.g. user descriptors).
    mu_values and lambda_values only apply to the default families; without
    lambda_values the Helmholtz grid runs over lambda r in HELMHOLTZ_T.
    """
    rows = []
    for identity in identities:
        logger.info("Checking identity %s", identity)
        for v, x, r in _cases(identity, fields, radii, centers, mu_values, lambda_values):
            rows.append(check_identity(identity, v, x, r, spec))
    failed = sum(not row.passed for row in rows)
    logger.info("Identity suite: %d rows, %d failed", len(rows), failed)
    return rows


def _accepts(identity: str, v: ScalarField) -> bool:
    if identity == "corollary-mhh":
        return v.positive and v.kind is FieldKind.PANHARMONIC
    return IDENTITIES[identity][0] is v.kind


def field_spot_checks(seed: int, descriptors: tuple = None) -> list:
    """Seeded PDE / positivity checks as identity rows (lhs 0, rhs the defect)"""
    catalogue = [parse_field_descriptor(d) for d in descriptors] if descriptors else (
        panharmonic_family(2.0) + helmholtz_family(3.0) + [harmonic_poly(5, "im"), quadratic_nonsolution()]
    )
    rows = []
    for v in catalogue:
        result = check_field(v, seed=seed)
        rows.append(
            IdentityRow(
                "field-pde",
                v.descriptor,
                Point(0.0, 0.0),
                0.0,
                v.frequency,
                0.0,
                result.max_relative_defect if result.positivity_holds else math.inf,
                1e-11,
            )
        )
    return rows


######################################################################
#  C O N V E R G E N C E
######################################################################
@dataclass(frozen=True)
class ConvergeRow:
    """Identity residual at one resolution"""

    identity: str
    field: str
    n_theta: int
    radial_order: int
    residual: float

    def serialize(self) -> dict:
        """Serializes a ConvergeRow into a flat dictionary"""
        return {
            "identity": self.identity,
            "field": self.field,
            "n_theta": self.n_theta,
            "radial_order": self.radial_order,
            "residual": self.residual,
        }


def run_convergence(identity: str, v: ScalarField, x: Point, r: float, base: QuadratureSpec) -> list:
    """Sweeps n_theta x radial_order and records |residual| of the identity per cell"""
    rows = []
    for n_theta in CONVERGE_NTHETA:
        for order in CONVERGE_ORDERS:
            spec = QuadratureSpec(n_theta, base.n_radial_panels, order, base.grading)
            row = check_identity(identity, v, x, r, spec)
            rows.append(ConvergeRow(identity, v.descriptor, n_theta, order, abs(row.residual)))
    return rows


def convergence_reached(rows: list, target: float = CONVERGE_TARGET) -> bool:
    """True when the finest cell reaches target"""
    return rows[-1].residual <= target


def is_monotone_to_floor(rows: list, floor: float = 1e-12) -> bool:
    """Along each order, refining n_theta never increases the residual above the floor"""
    by_order = {}
    for row in rows:
        by_order.setdefault(row.radial_order, []).append(row.residual)
    return all(
        later <= max(earlier, floor) for residuals in by_order.values() for earlier, later in zip(residuals, residuals[1:])
    )

"""
Inverse mean value properties

Residual functionals telling whether a weighted (or unweighted) mean value
identity holds for a domain at a point, the strict-sign deviation certificate
that separates discs from every other domain of at least the same area, and
recovery of disc parameters by minimizing the residuals.
"""

import logging
import math

import numpy as np
from scipy import optimize

from discmeans import quadrature
from discmeans.fields import FieldKind, ScalarField, constant_field, plane_panharmonic, radial_panharmonic
from discmeans.geometry import Domain
from discmeans.models import (
    HypothesisError,
    Point,
    QuadratureSpec,
    RecoveryResult,
    ResidualReport,
    SignCertificate,
    Theorem,
    ThresholdPolicy,
)
from discmeans.specfun import T_MAX, coeff_a, coeff_a_bullet

logger = logging.getLogger(__name__)

AREA_RTOL = 1e-10
RECOVERY_PENALTY = 1e6
RECOVERY_FTOL = 1e-20
RECOVERY_MIN_RADIUS = 1e-3
RADIUS_TOL = 1e-14


######################################################################
#  H Y P O T H E S E S
######################################################################
def _require_area_at_least(omega: Domain, r: float) -> float:
    """Checks |Omega| >= pi r^2 and returns |Omega|"""
    if not r > 0.0:
        raise HypothesisError(f"r must be positive, got {r}")
    area = omega.area()
    if area < math.pi * r * r * (1.0 - AREA_RTOL):
        raise HypothesisError(f"|Omega| = {area:.12g} is smaller than pi r^2 = {math.pi * r * r:.12g}")
    return area


def _require_equal_area(omega: Domain, r: float) -> float:
    """Checks |Omega| = pi r^2 and returns |Omega|"""
    if not r > 0.0:
        raise HypothesisError(f"r must be positive, got {r}")
    area = omega.area()
    if abs(area - math.pi * r * r) > AREA_RTOL * math.pi * r * r:
        raise HypothesisError(f"|Omega| = {area:.12g} differs from pi r^2 = {math.pi * r * r:.12g}")
    return area


def _require_positive_solution(v: ScalarField, mu: float):
    """v must be positive and mu-panharmonic; mu = 0 admits positive harmonic v"""
    if not v.positive:
        raise HypothesisError(f"{v!r} is not a positive field")
    if mu == 0.0 and v.kind is FieldKind.HARMONIC:
        return
    if mu <= 0.0 or v.kind is not FieldKind.PANHARMONIC or not math.isclose(v.frequency, mu, rel_tol=1e-12):
        raise HypothesisError(f"{v!r} is not {mu:g}-panharmonic")


######################################################################
#  R E S I D U A L S
######################################################################
def residual_t4(
    omega: Domain, x0: Point, r: float, mu: float, v: ScalarField, spec: QuadratureSpec = QuadratureSpec()
) -> ResidualReport:
    """a(mu r) v(x0) against (1/|Omega|) int_Omega v log(r / |x0 - y|)"""
    logger.info("Weighted panharmonic residual for %r at %r, r=%g, mu=%g", omega, x0, r, mu)
    area = _require_area_at_least(omega, r)
    _require_positive_solution(v, mu)
    rhs = quadrature.weighted_domain_mean(v, omega, x0, r, spec, refine=True)
    return ResidualReport(
        theorem=Theorem.T4_PANHARMONIC,
        lhs=coeff_a(mu * r) * v.at(x0),
        rhs=rhs.value,
        quadrature_floor=rhs.est_error,
        mu=mu,
        r=r,
        area=area,
    )


def residual_t5(omega: Domain, x0: Point, r: float, spec: QuadratureSpec = QuadratureSpec()) -> ResidualReport:
    """1/2 against the purely geometric (1/|Omega|) int_Omega log(r / |x0 - y|)"""
    logger.info("Weighted harmonic residual for %r at %r, r=%g", omega, x0, r)
    area = _require_area_at_least(omega, r)
    rhs = quadrature.weighted_domain_mean(constant_field(), omega, x0, r, spec, refine=True)
    return ResidualReport(
        theorem=Theorem.T5_HARMONIC, lhs=0.5, rhs=rhs.value, quadrature_floor=rhs.est_error, mu=0.0, r=r, area=area
    )


def residual_t2(
    omega: Domain, x0: Point, r: float, mu: float, v: ScalarField, spec: QuadratureSpec = QuadratureSpec()
) -> ResidualReport:
    """a•(mu r) v(x0) against the plain area mean M(v, Omega); needs |Omega| = pi r^2"""
    logger.info("Unweighted residual for %r at %r, r=%g, mu=%g", omega, x0, r, mu)
    area = _require_equal_area(omega, r)
    _require_positive_solution(v, mu)
    if not omega.contains(x0):
        raise HypothesisError(f"{x0!r} does not lie in {omega!r}")
    rhs = quadrature.domain_mean(v, omega, spec, refine=True)
    return ResidualReport(
        theorem=Theorem.T2_UNWEIGHTED,
        lhs=coeff_a_bullet(mu * r) * v.at(x0),
        rhs=rhs.value,
        quadrature_floor=rhs.est_error,
        mu=mu,
        r=r,
        area=area,
    )


def sign_certificate(
    omega: Domain,
    x0: Point,
    r: float,
    mu: float,
    spec: QuadratureSpec = QuadratureSpec(),
    threshold_policy: ThresholdPolicy = ThresholdPolicy(),
) -> SignCertificate:
    """Deviation int_Omega V log(r/|x0 - y|) - pi r^2 a(mu r) for V = I0(mu |y - x0|)

    Zero for Omega = D_r(x0) and strictly negative for every other domain
    with |Omega| >= pi r^2.
    """
    area = _require_area_at_least(omega, r)
    radial = radial_panharmonic(mu, x0)
    mean = quadrature.weighted_domain_mean(radial, omega, x0, r, spec, refine=True)
    disc_value = math.pi * r * r * coeff_a(mu * r)
    floor = area * mean.est_error
    deviation = area * mean.value - disc_value
    certificate = SignCertificate.classify(
        deviation,
        threshold_policy.threshold(floor),
        disc_value=disc_value,
        quadrature_floor=floor,
        mu=mu,
        r=r,
        area=area,
    )
    logger.info("Certificate for %r: deviation %.6e -> %s", omega, deviation, certificate.conclusion.value)
    return certificate


######################################################################
#  D I S C   R E C O V E R Y
######################################################################
def default_recovery_fields(mu: float, center: Point) -> list:
    """V centered at center plus plane waves at angles k pi / 4, k = 0..3"""
    return [radial_panharmonic(mu, center)] + [plane_panharmonic(mu, k * math.pi / 4.0) for k in range(4)]


def recovery_radius_bounds(omega: Domain, mu: float) -> tuple:
    """Radii a fitted disc may take: |Omega| >= pi r^2 and mu r <= T_MAX"""
    upper = math.sqrt(omega.area() / math.pi)
    if mu > 0.0:
        upper = min(upper, T_MAX / mu)
    return RECOVERY_MIN_RADIUS * upper, upper


def recovery_objective(omega: Domain, mu: float, field_family: list, spec: QuadratureSpec):
    """Returns F(x1, x2, r) = sum_j [a(mu r) v_j(x0) - weighted mean of v_j]^2

    Radii outside (0, sqrt(|Omega| / pi)] or past T_MAX / mu score
    RECOVERY_PENALTY + |r|; centers omega is not star-shaped about score
    RECOVERY_PENALTY plus their distance to the anchor.
    """
    area = omega.area()
    area_radius = math.sqrt(area / math.pi)

    def objective(params) -> float:
        x0, r = Point(float(params[0]), float(params[1])), float(params[2])
        if r <= 0.0 or mu * r > T_MAX or r > area_radius * (1.0 + AREA_RTOL):
            return RECOVERY_PENALTY + abs(r)
        if not omega.visible_from(x0):
            return RECOVERY_PENALTY + x0.distance(omega.anchor)
        nodes = quadrature.fan_nodes(omega, x0, spec)
        a = coeff_a(mu * r)
        return math.fsum((a * v.at(x0) - nodes.integrate_weighted(v, r) / area) ** 2 for v in field_family)

    return objective


def _weighted_moments(omega: Domain, x0: Point, field_family: list, spec: QuadratureSpec) -> tuple:
    """v_j(x0), int_Omega v_j and int_Omega v_j log|x0 - y| for each field of the family"""
    nodes = quadrature.fan_nodes(omega, x0, spec)
    log_rho = np.log(nodes.rho)
    samples = [v.evaluate(nodes.x1, nodes.x2) for v in field_family]
    return (
        np.array([v.at(x0) for v in field_family]),
        np.array([nodes.integrate(values) for values in samples]),
        np.array([nodes.integrate(values * log_rho) for values in samples]),
    )


def best_radius(omega: Domain, mu: float, field_family: list, spec: QuadratureSpec, x0: Point, r_start: float) -> tuple:
    """Minimizes F(x0, r) over the radii of recovery_radius_bounds; returns (r, F)

    int_Omega v log(r / |x0 - y|) = log(r) int_Omega v - int_Omega v log|x0 - y|,
    so one fan of nodes about x0 serves every trial radius.
    """
    area = omega.area()
    lower, upper = recovery_radius_bounds(omega, mu)
    values, totals, log_moments = _weighted_moments(omega, x0, field_family, spec)

    def residuals(log_r) -> np.ndarray:
        t = float(log_r[0])
        return coeff_a(min(mu * math.exp(t), T_MAX)) * values - (totals * t - log_moments) / area

    bounds = (math.log(lower), math.log(upper))
    start = min(max(math.log(r_start), bounds[0]), bounds[1])
    fit = optimize.least_squares(residuals, [start], bounds=bounds, xtol=RADIUS_TOL, ftol=RADIUS_TOL, gtol=RADIUS_TOL)
    r = min(math.exp(float(fit.x[0])), upper)
    return r, math.fsum(residuals([math.log(r)]) ** 2)


def center_objective(omega: Domain, mu: float, field_family: list, spec: QuadratureSpec, r_start: float):
    """Returns G(x1, x2) = F at the best radius for that center

    Centers omega is not star-shaped about score as in recovery_objective.
    """

    def objective(center) -> float:
        x0 = Point(float(center[0]), float(center[1]))
        if not omega.visible_from(x0):
            return RECOVERY_PENALTY + x0.distance(omega.anchor)
        return best_radius(omega, mu, field_family, spec, x0, r_start)[1]

    return objective


def recover_disc(
    omega: Domain,
    mu: float,
    field_family: list = None,
    spec: QuadratureSpec = QuadratureSpec(),
    init: tuple = None,
    max_iter: int = 500,
    xatol: float = 1e-9,
) -> RecoveryResult:
    """Fits a center and radius to omega so the weighted identities hold

    Nelder-Mead runs on the center; every trial center takes its best
    admissible radius from best_radius, so pi r^2 never exceeds |Omega|.
    init is (center, radius) and defaults to the anchor of omega and the
    equal-area radius. Returns the best point found, flagged as not
    converged when max_iter is exhausted.
    """
    if field_family is None:
        field_family = default_recovery_fields(mu, omega.anchor)
    for v in field_family:
        _require_positive_solution(v, mu)
    if init is None:
        init = (omega.anchor, math.sqrt(omega.area() / math.pi))
    center, radius = init
    logger.info("Recovering disc for %r from %r, r=%g", omega, center, radius)

    start_value = recovery_objective(omega, mu, field_family, spec)([center.x1, center.x2, radius])
    if start_value <= RECOVERY_FTOL:
        logger.info("Initial guess already satisfies the identities")
        return RecoveryResult(center, radius, math.sqrt(start_value), iterations=0, converged=True, evaluations=1)

    start = np.array([center.x1, center.x2])
    step = 0.25 * radius
    simplex = np.vstack([start, start + np.diag([step, step])])
    result = optimize.minimize(
        center_objective(omega, mu, field_family, spec, radius),
        start,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "maxiter": max_iter, "xatol": xatol, "fatol": np.inf},
    )
    if not result.success:
        logger.warning("Nelder-Mead stopped after %d iterations: %s", result.nit, result.message)
    fitted_center = Point(float(result.x[0]), float(result.x[1]))
    if not omega.visible_from(fitted_center):
        raise HypothesisError(f"No center of {omega!r} found from {center!r}")
    fitted_radius, value = best_radius(omega, mu, field_family, spec, fitted_center, radius)
    logger.debug("Best radius %.15g at %r", fitted_radius, fitted_center)
    return RecoveryResult(
        center=fitted_center,
        radius=fitted_radius,
        final_residual=math.sqrt(value),
        iterations=int(result.nit),
        converged=bool(result.success),
        evaluations=int(result.nfev) + 2,
    )

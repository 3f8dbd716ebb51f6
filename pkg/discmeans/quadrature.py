"""
Integral means over circles, discs and star-shaped domains

Every area integral is computed in coordinates centered at the pole x0 of
the logarithmic weight log(r / |x0 - y|), so the Jacobian cancels the
singularity:

  * curved domains (discs, star domains) use the fan map
    y = x0 + u (gamma(phi) - x0) with the periodic trapezoidal rule in phi;
  * polygons are split into fan triangles (x0, v_i, v_i+1), each mapped from
    the unit square by the collapsed-edge (Duffy) transform and integrated by
    tensor Gauss-Legendre.

The radial variable u in [0, 1] uses Gauss-Legendre on geometrically graded
panels toward u = 0, where the integrand keeps a u log u derivative
singularity. Reductions use math.fsum in a fixed node order, so results are
reproducible bit for bit.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from discmeans.fields import ScalarField
from discmeans.geometry import CurvedDomain, Disc, Domain, PolygonDomain
from discmeans.models import HypothesisError, MeanResult, Point, QuadratureSpec

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-12


######################################################################
#  N O D E   S E T S
######################################################################
@dataclass(frozen=True)
class NodeSet:
    """Quadrature nodes of a domain about a pole

    weights carry the full area element, rho is the distance to the pole.
    """

    x1: np.ndarray
    x2: np.ndarray
    weights: np.ndarray
    rho: np.ndarray

    def __len__(self):
        return self.weights.size

    def integrate(self, values) -> float:
        """Compensated sum of weights * values"""
        return math.fsum(self.weights * values)

    def integrate_field(self, scalar_field: ScalarField) -> float:
        """Integral of the field over the domain"""
        return self.integrate(scalar_field.evaluate(self.x1, self.x2))

    def integrate_weighted(self, scalar_field: ScalarField, r: float) -> float:
        """Integral of field * log(r / |x0 - y|) over the domain"""
        return self.integrate(scalar_field.evaluate(self.x1, self.x2) * np.log(r / self.rho))


def _frozen(*arrays):
    for array in arrays:
        array.flags.writeable = False
    return arrays


@lru_cache(maxsize=16)
def radial_rule(n_panels: int, order: int, grading: float) -> tuple:
    """Gauss-Legendre nodes and weights on [0, 1] with panels graded toward 0

    Breakpoints are 0, g^(P-1), ..., g, 1 for P panels and ratio g.
    """
    x, w = special.roots_legendre(order)
    breaks = np.concatenate(([0.0], grading ** np.arange(n_panels - 1, -1, -1, dtype=float)))
    lower, upper = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (upper - lower)
    return _frozen((half * x + lower + half).ravel(), (half * w).ravel())


@lru_cache(maxsize=16)
def angular_rule(n_theta: int) -> tuple:
    """Equispaced angles with trapezoidal weights on [0, 2pi)"""
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    return _frozen(theta, np.full(n_theta, 2.0 * math.pi / n_theta))


@lru_cache(maxsize=64)
def fan_nodes(domain: Domain, x0: Point, spec: QuadratureSpec) -> NodeSet:
    """Nodes of the fan decomposition of domain about x0

    Raises HypothesisError when some boundary point is not visible from x0.
    """
    if not domain.visible_from(x0):
        raise HypothesisError(f"{domain!r} is not star-shaped about {x0!r}")
    if isinstance(domain, PolygonDomain):
        return _polygon_fan(domain, x0, spec)
    if isinstance(domain, CurvedDomain):
        return _curved_fan(domain, x0, spec)
    raise HypothesisError(f"No fan decomposition for {domain!r}")


def _curved_fan(domain: CurvedDomain, x0: Point, spec: QuadratureSpec) -> NodeSet:
    phi, w_phi = angular_rule(spec.n_theta)
    u, w_u = radial_rule(spec.n_radial_panels, spec.radial_order, spec.grading)
    gamma, dgamma = domain.boundary(phi)
    dx, dy = gamma[0] - x0.x1, gamma[1] - x0.x2
    jacobian = dx * dgamma[1] - dy * dgamma[0]
    length = np.hypot(dx, dy)
    return NodeSet(
        x1=(x0.x1 + u[None, :] * dx[:, None]).ravel(),
        x2=(x0.x2 + u[None, :] * dy[:, None]).ravel(),
        weights=((w_phi * jacobian)[:, None] * (w_u * u)[None, :]).ravel(),
        rho=(u[None, :] * length[:, None]).ravel(),
    )


def _polygon_fan(domain: PolygonDomain, x0: Point, spec: QuadratureSpec) -> NodeSet:
    u, w_u = radial_rule(spec.n_radial_panels, spec.radial_order, spec.grading)
    edges = domain.edges()
    s, w_s = special.roots_legendre(max(spec.radial_order, spec.n_theta // len(edges)))
    s, w_s = 0.5 * (s + 1.0), 0.5 * w_s
    parts = []
    for a, b in edges:
        px = a.x1 + s * (b.x1 - a.x1) - x0.x1
        py = a.x2 + s * (b.x2 - a.x2) - x0.x2
        # twice the area of the fan triangle
        double_area = (a.x1 - x0.x1) * (b.x2 - x0.x2) - (a.x2 - x0.x2) * (b.x1 - x0.x1)
        parts.append(
            (
                x0.x1 + u[None, :] * px[:, None],
                x0.x2 + u[None, :] * py[:, None],
                double_area * w_s[:, None] * (w_u * u)[None, :],
                u[None, :] * np.hypot(px, py)[:, None],
            )
        )
    return NodeSet(*(np.concatenate([part[i].ravel() for part in parts]) for i in range(4)))


######################################################################
#  H E L P E R S
######################################################################
def _check_radius(r: float):
    if not (math.isfinite(r) and r > 0.0):
        raise HypothesisError(f"Radius must be positive, got {r}")


def _with_error(compute, spec: QuadratureSpec, refine: bool) -> MeanResult:
    """Evaluates compute(spec); with refine, est_error compares against spec.refined()"""
    value = compute(spec)
    est_error = abs(compute(spec.refined()) - value) if refine else 0.0
    return MeanResult(value=value, spec_used=spec, est_error=est_error)


######################################################################
#  M E A N S
######################################################################
def circle_mean(
    v: ScalarField, x: Point, r: float, spec: QuadratureSpec = QuadratureSpec(), refine: bool = False
) -> MeanResult:
    """M(v, S_r(x)) by the periodic trapezoidal rule"""
    _check_radius(r)

    def compute(current):
        theta, _ = angular_rule(current.n_theta)
        values = v.evaluate(x.x1 + r * np.cos(theta), x.x2 + r * np.sin(theta))
        return math.fsum(values) / current.n_theta

    return _with_error(compute, spec, refine)


def disc_mean(v: ScalarField, x: Point, r: float, spec: QuadratureSpec = QuadratureSpec(), refine: bool = False) -> MeanResult:
    """M(v, D_r(x)) in polar coordinates about x"""
    _check_radius(r)
    disc = Disc(x, r)
    return _with_error(lambda current: fan_nodes(disc, x, current).integrate_field(v) / disc.area(), spec, refine)


def weighted_disc_mean(
    v: ScalarField, x: Point, r: float, spec: QuadratureSpec = QuadratureSpec(), refine: bool = False
) -> MeanResult:
    """(1 / pi r^2) int_{D_r(x)} v(y) log(r / |x - y|) dy"""
    _check_radius(r)
    disc = Disc(x, r)
    return _with_error(lambda current: fan_nodes(disc, x, current).integrate_weighted(v, r) / disc.area(), spec, refine)


def domain_mean(v: ScalarField, omega: Domain, spec: QuadratureSpec = QuadratureSpec(), refine: bool = False) -> MeanResult:
    """M(v, Omega), integrated about the anchor of omega"""
    area = omega.area()
    return _with_error(lambda current: fan_nodes(omega, omega.anchor, current).integrate_field(v) / area, spec, refine)


def weighted_integral(v: ScalarField, omega: Domain, x0: Point, r: float, spec: QuadratureSpec) -> float:
    """int_Omega v(y) log(r / |x0 - y|) dy for any x0 omega is star-shaped about"""
    _check_radius(r)
    return fan_nodes(omega, x0, spec).integrate_weighted(v, r)


def weighted_domain_mean(
    v: ScalarField, omega: Domain, x0: Point, r: float, spec: QuadratureSpec = QuadratureSpec(), refine: bool = False
) -> MeanResult:
    """(1 / |Omega|) int_Omega v(y) log(r / |x0 - y|) dy

    x0 must be the star center or anchor of omega.
    """
    if omega.anchor.distance(x0) > POLE_TOLERANCE:
        raise HypothesisError(f"x0 {x0!r} is not the anchor {omega.anchor!r} of the domain")
    area = omega.area()
    return _with_error(lambda current: weighted_integral(v, omega, x0, r, current) / area, spec, refine)


def green_identity_residual(w: ScalarField, x: Point, r: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """w(x) - M(w, S_r(x)) + (1 / 2pi) int_{D_r(x)} lap w(y) log(r / |x - y|) dy

    The volume term equals (r^2 / 2) times the weighted disc mean of lap w.
    """
    volume = weighted_disc_mean(w.laplacian_field(), x, r, spec).value
    return w.at(x) - circle_mean(w, x, r, spec).value + 0.5 * r * r * volume


def subharmonic_gap(v: ScalarField, x: Point, r: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Weighted disc mean minus v(x) / 2; positive for nonnegative panharmonic v"""
    return weighted_disc_mean(v, x, r, spec).value - 0.5 * v.at(x)

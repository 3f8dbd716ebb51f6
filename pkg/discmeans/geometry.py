"""
Planar domains

Discs, regions star-shaped about a designated center with a trigonometric
polynomial boundary radius, and polygons star-shaped about an interior
anchor. Domains are immutable; every predicate is pure.

Domain files hold a single JSON object:

    {"type": "disc", "center": [0, 0], "radius": 1.0}
    {"type": "star", "center": [0, 0], "c0": 1.0, "cos": [0.1, 0.0], "sin": [0.0, 0.05]}
    {"type": "polygon", "anchor": [0.5, 0.5], "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from flask import json
from scipy import optimize

from discmeans.models import DataValidationError, Point

logger = logging.getLogger(__name__)

STAR_MAX_DEGREE = 16
STAR_VALIDATION_NODES = 4096
STAR_AREA_NODES = 2048
BOUNDARY_SAMPLES = 4096
ADMISSIBLE_CLEARANCE = 1e-12


######################################################################
#  D O M A I N   B A S E   C L A S S
######################################################################
class Domain(ABC):
    """A bounded planar region star-shaped about its anchor"""

    kind = "domain"

    @property
    @abstractmethod
    def anchor(self) -> Point:
        """The point the region is star-shaped about (center of homotheties)"""

    @abstractmethod
    def area(self) -> float:
        """Area of the region"""

    @abstractmethod
    def contains(self, p: Point) -> bool:
        """True for points of the open region"""

    @abstractmethod
    def boundary_distance(self, p: Point) -> float:
        """Distance from p to the boundary curve"""

    @abstractmethod
    def scaled(self, factor: float) -> "Domain":
        """Homothety about the anchor"""

    @abstractmethod
    def visible_from(self, x0: Point) -> bool:
        """True when x0 is interior and every boundary point is visible from it"""

    @abstractmethod
    def serialize(self) -> dict:
        """Serializes the domain into the domain file layout"""


class CurvedDomain(Domain):
    """Domain with a smooth 2pi-periodic boundary parameterization"""

    @abstractmethod
    def boundary(self, phi: np.ndarray) -> tuple:
        """Returns (gamma, dgamma) as (2, n) arrays at parameters phi"""

    def visible_from(self, x0: Point) -> bool:
        if not self.contains(x0):
            return False
        phi = np.linspace(0.0, 2.0 * math.pi, STAR_VALIDATION_NODES, endpoint=False)
        gamma, dgamma = self.boundary(phi)
        cross = (gamma[0] - x0.x1) * dgamma[1] - (gamma[1] - x0.x2) * dgamma[0]
        return bool(np.all(cross > 0.0))

    def boundary_distance(self, p: Point) -> float:
        phi = np.linspace(0.0, 2.0 * math.pi, BOUNDARY_SAMPLES, endpoint=False)
        gamma, _ = self.boundary(phi)
        dist = np.hypot(gamma[0] - p.x1, gamma[1] - p.x2)
        best = int(np.argmin(dist))
        step = 2.0 * math.pi / BOUNDARY_SAMPLES

        def distance_at(angle):
            point, _ = self.boundary(np.array([angle]))
            return math.hypot(point[0, 0] - p.x1, point[1, 0] - p.x2)

        # polish the sampled minimum inside its neighboring cells
        local = optimize.minimize_scalar(
            distance_at, bounds=(phi[best] - step, phi[best] + step), method="bounded", options={"xatol": 1e-12}
        )
        return float(min(dist[best], local.fun))


######################################################################
#  D I S C
######################################################################
@dataclass(frozen=True)
class Disc(CurvedDomain):
    """Open disc D_r(x) = {y : |y - x| < r}"""

    center: Point
    radius: float
    kind = "disc"

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise DataValidationError(f"Disc radius must be positive, got {self.radius}")

    def __repr__(self):
        return f"<Disc center={self.center!r} radius=[{self.radius:.6g}]>"

    @property
    def anchor(self) -> Point:
        return self.center

    def area(self) -> float:
        return math.pi * self.radius**2

    def contains(self, p: Point) -> bool:
        return self.center.distance(p) < self.radius

    def boundary(self, phi):
        cos, sin = np.cos(phi), np.sin(phi)
        gamma = np.array([self.center.x1 + self.radius * cos, self.center.x2 + self.radius * sin])
        return gamma, np.array([-self.radius * sin, self.radius * cos])

    def boundary_distance(self, p: Point) -> float:
        return abs(self.radius - self.center.distance(p))

    def visible_from(self, x0: Point) -> bool:
        return self.contains(x0)

    def scaled(self, factor: float) -> "Disc":
        return Disc(self.center, self.radius * factor)

    def serialize(self) -> dict:
        return {"type": "disc", "center": self.center.serialize(), "radius": self.radius}


######################################################################
#  S T A R   D O M A I N
######################################################################
@dataclass(frozen=True)
class StarDomain(CurvedDomain):
    """Region {x0 + rho (cos t, sin t) : rho < R(t)} with

    R(t) = c0 + sum_k a_k cos(k t) + b_k sin(k t),  k = 1..K
    """

    center: Point
    c0: float
    cos_coeffs: tuple = field(default=())
    sin_coeffs: tuple = field(default=())
    kind = "star"

    def __post_init__(self):
        degree = max(len(self.cos_coeffs), len(self.sin_coeffs))
        if degree > STAR_MAX_DEGREE:
            raise DataValidationError(f"StarDomain degree {degree} exceeds {STAR_MAX_DEGREE}")
        # pad both coefficient lists to the common degree
        for name in ("cos_coeffs", "sin_coeffs"):
            coeffs = tuple(float(c) for c in getattr(self, name))
            object.__setattr__(self, name, coeffs + (0.0,) * (degree - len(coeffs)))
        theta = np.linspace(0.0, 2.0 * math.pi, STAR_VALIDATION_NODES, endpoint=False)
        if not np.all(self.radius_at(theta) > 0.0):
            raise DataValidationError("StarDomain radius function must be positive")

    def __repr__(self):
        return f"<StarDomain center={self.center!r} c0=[{self.c0:.6g}] degree=[{self.degree}]>"

    @property
    def anchor(self) -> Point:
        return self.center

    @property
    def degree(self) -> int:
        """Highest harmonic K of the radius function"""
        return len(self.cos_coeffs)

    def radius_at(self, theta):
        """Boundary radius R(theta)"""
        theta = np.asarray(theta, dtype=float)
        total = np.full(theta.shape, float(self.c0))
        for k, (a_k, b_k) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            total = total + a_k * np.cos(k * theta) + b_k * np.sin(k * theta)
        return total

    def radius_derivative(self, theta):
        """R'(theta)"""
        theta = np.asarray(theta, dtype=float)
        total = np.zeros(theta.shape)
        for k, (a_k, b_k) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            total = total + k * (b_k * np.cos(k * theta) - a_k * np.sin(k * theta))
        return total

    def boundary(self, phi):
        rad, drad = self.radius_at(phi), self.radius_derivative(phi)
        cos, sin = np.cos(phi), np.sin(phi)
        gamma = np.array([self.center.x1 + rad * cos, self.center.x2 + rad * sin])
        return gamma, np.array([drad * cos - rad * sin, drad * sin + rad * cos])

    def area(self) -> float:
        theta = np.linspace(0.0, 2.0 * math.pi, STAR_AREA_NODES, endpoint=False)
        return 0.5 * (2.0 * math.pi / STAR_AREA_NODES) * math.fsum(self.radius_at(theta) ** 2)

    def contains(self, p: Point) -> bool:
        rho = self.center.distance(p)
        if rho == 0.0:
            return True
        return rho < float(self.radius_at(math.atan2(p.x2 - self.center.x2, p.x1 - self.center.x1)))

    def scaled(self, factor: float) -> "StarDomain":
        return StarDomain(
            self.center,
            self.c0 * factor,
            tuple(a * factor for a in self.cos_coeffs),
            tuple(b * factor for b in self.sin_coeffs),
        )

    def serialize(self) -> dict:
        return {
            "type": "star",
            "center": self.center.serialize(),
            "c0": self.c0,
            "cos": list(self.cos_coeffs),
            "sin": list(self.sin_coeffs),
        }


######################################################################
#  P O L Y G O N
######################################################################
def _cross(o: Point, a: Point, b: Point) -> float:
    """z-component of (a - o) x (b - o); positive when o, a, b turn left"""
    return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    return min(a.x1, b.x1) <= p.x1 <= max(a.x1, b.x1) and min(a.x2, b.x2) <= p.x2 <= max(a.x2, b.x2)


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1, d2 = _cross(q1, q2, p1), _cross(q1, q2, p2)
    d3, d4 = _cross(p1, p2, q1), _cross(p1, p2, q2)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return (
        (d1 == 0 and _on_segment(p1, q1, q2))
        or (d2 == 0 and _on_segment(p2, q1, q2))
        or (d3 == 0 and _on_segment(q1, p1, p2))
        or (d4 == 0 and _on_segment(q2, p1, p2))
    )


@dataclass(frozen=True)
class PolygonDomain(Domain):
    """Simple counterclockwise polygon star-shaped about an interior anchor"""

    vertices: tuple
    anchor_point: Point
    kind = "polygon"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 3:
            raise DataValidationError("A polygon needs at least three vertices")
        if self.signed_area() <= 0.0:
            raise DataValidationError("Polygon vertices must be ordered counterclockwise with positive area")
        if not self.is_simple():
            raise DataValidationError("Polygon must not be self-intersecting")
        if not self.visible_from(self.anchor_point):
            raise DataValidationError(f"Polygon is not star-shaped about its anchor {self.anchor_point!r}")

    def __repr__(self):
        return f"<PolygonDomain vertices=[{len(self.vertices)}] anchor={self.anchor_point!r}>"

    @property
    def anchor(self) -> Point:
        return self.anchor_point

    def edges(self):
        """Consecutive (start, end) vertex pairs, closing the loop"""
        return list(zip(self.vertices, self.vertices[1:] + self.vertices[:1]))

    def signed_area(self) -> float:
        """Shoelace formula; positive for counterclockwise order"""
        return 0.5 * math.fsum(a.x1 * b.x2 - b.x1 * a.x2 for a, b in self.edges())

    def is_simple(self) -> bool:
        """True when no two non-adjacent edges meet"""
        edges = self.edges()
        count = len(edges)
        for i in range(count):
            for j in range(i + 1, count):
                if j == i + 1 or (i == 0 and j == count - 1):
                    continue
                if _segments_intersect(*edges[i], *edges[j]):
                    return False
        return True

    def area(self) -> float:
        return self.signed_area()

    def contains(self, p: Point) -> bool:
        """Winding number test; the point is outside iff the winding number is zero"""
        winding_number = 0
        for source, target in self.edges():
            if source.x2 <= p.x2:
                if target.x2 > p.x2 and _cross(source, target, p) > 0:
                    winding_number += 1
            elif target.x2 <= p.x2 and _cross(source, target, p) < 0:
                winding_number -= 1
        return winding_number != 0

    def boundary_distance(self, p: Point) -> float:
        best = math.inf
        for a, b in self.edges():
            ex, ey = b.x1 - a.x1, b.x2 - a.x2
            s = ((p.x1 - a.x1) * ex + (p.x2 - a.x2) * ey) / (ex * ex + ey * ey)
            s = min(1.0, max(0.0, s))
            best = min(best, math.hypot(a.x1 + s * ex - p.x1, a.x2 + s * ey - p.x2))
        return best

    def visible_from(self, x0: Point) -> bool:
        """Every fan triangle (x0, v_i, v_i+1) is positively oriented"""
        return all(_cross(x0, a, b) > 0.0 for a, b in self.edges())

    def scaled(self, factor: float) -> "PolygonDomain":
        a = self.anchor_point
        return PolygonDomain(
            tuple(Point(a.x1 + factor * (v.x1 - a.x1), a.x2 + factor * (v.x2 - a.x2)) for v in self.vertices),
            a,
        )

    def serialize(self) -> dict:
        return {
            "type": "polygon",
            "anchor": self.anchor_point.serialize(),
            "vertices": [v.serialize() for v in self.vertices],
        }


######################################################################
#  S H A P E   C O N S T R U C T O R S
######################################################################
def rectangle(width: float, height: float, center: Point) -> PolygonDomain:
    """Axis-aligned rectangle anchored at its center"""
    hw, hh = 0.5 * width, 0.5 * height
    corners = [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
    return PolygonDomain(tuple(Point(center.x1 + dx, center.x2 + dy) for dx, dy in corners), center)


def regular_polygon(sides: int, circumradius: float, center: Point, rotation: float = 0.0) -> PolygonDomain:
    """Regular polygon anchored at its center"""
    angles = rotation + 2.0 * math.pi * np.arange(sides) / sides
    return PolygonDomain(
        tuple(Point(center.x1 + circumradius * math.cos(t), center.x2 + circumradius * math.sin(t)) for t in angles),
        center,
    )


######################################################################
#  M O D U L E   L E V E L   O P E R A T I O N S
######################################################################
def area(domain: Domain) -> float:
    """|Omega|"""
    return domain.area()


def contains(domain: Domain, p: Point) -> bool:
    """Open-set membership"""
    return domain.contains(p)


def is_admissible(disc: Disc, omega: Domain) -> bool:
    """True iff the closed disc lies inside omega with clearance ADMISSIBLE_CLEARANCE"""
    if not omega.contains(disc.center):
        return False
    return omega.boundary_distance(disc.center) > disc.radius + ADMISSIBLE_CLEARANCE


def scale_to_area(domain: Domain, target_area: float) -> Domain:
    """Homothety about the anchor so that the area equals target_area"""
    if not target_area > 0.0:
        raise DataValidationError(f"target_area must be positive, got {target_area}")
    factor = math.sqrt(target_area / domain.area())
    logger.debug("Scaling %r by %.15g", domain, factor)
    return domain.scaled(factor)


def deserialize_domain(data: dict) -> Domain:
    """
    Builds a Domain from its dictionary form

    Args:
        data (dict): a domain file object with a "type" of disc, star or polygon
    """
    try:
        kind = data["type"]
        if kind == "disc":
            return Disc(Point.deserialize(data["center"]), float(data["radius"]))
        if kind == "star":
            return StarDomain(
                Point.deserialize(data["center"]),
                float(data["c0"]),
                tuple(float(c) for c in data.get("cos", [])),
                tuple(float(c) for c in data.get("sin", [])),
            )
        if kind == "polygon":
            return PolygonDomain(
                tuple(Point.deserialize(v) for v in data["vertices"]),
                Point.deserialize(data["anchor"]),
            )
        raise DataValidationError(f"Unknown domain type: {kind!r}")
    except KeyError as error:
        raise DataValidationError("Invalid domain: missing " + error.args[0]) from error
    except (AttributeError, TypeError, ValueError) as error:
        raise DataValidationError(f"Invalid domain: {error}") from error


def load_domain(path: str) -> Domain:
    """Reads a domain file"""
    logger.info("Loading domain file %s", path)
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as error:
        raise DataValidationError(f"Cannot read domain file {path}: {error}") from error
    except ValueError as error:
        raise DataValidationError(f"Domain file {path} is not valid JSON: {error}") from error
    return deserialize_domain(data)

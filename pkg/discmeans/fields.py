"""
Exact solution families

Each constructor returns an immutable ScalarField bundling point evaluation
with the exact Laplacian of the family, tagged by the equation it solves:

    panharmonic   lap v - mu^2 v = 0
    harmonic      lap v = 0
    helmholtz     lap u + lambda^2 u = 0
    general       no equation (Green identity test input)

Fields are addressable by descriptor strings such as ``plane-mhh:mu=2,theta=0.3``.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np

from discmeans.models import DataValidationError, Point
from discmeans.specfun import bessel_I0, bessel_J0

logger = logging.getLogger(__name__)

HARMONIC_MAX_DEGREE = 12


class FieldKind(Enum):
    """Equation class of a ScalarField"""

    PANHARMONIC = "panharmonic"
    HARMONIC = "harmonic"
    HELMHOLTZ = "helmholtz"
    GENERAL = "general"


@dataclass(frozen=True)
class ScalarField:
    """A PDE solution with point evaluation and an exact Laplacian"""

    descriptor: str
    kind: FieldKind
    frequency: float
    positive: bool
    function: Callable = field(repr=False, compare=False)
    laplacian_function: Callable = field(repr=False, compare=False)

    def __repr__(self):
        return f"<ScalarField {self.descriptor} kind=[{self.kind.value}]>"

    def evaluate(self, x1, x2):
        """Evaluates the field at coordinates (scalars or broadcastable arrays)"""
        return self.function(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))

    def laplacian(self, x1, x2):
        """Evaluates the exact Laplacian at coordinates"""
        return self.laplacian_function(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))

    def at(self, point: Point) -> float:
        """Value at a single Point"""
        return float(self.evaluate(point.x1, point.x2))

    def laplacian_field(self) -> "ScalarField":
        """The Laplacian as a field of its own (kind general)"""
        return ScalarField(
            descriptor=f"lap({self.descriptor})",
            kind=FieldKind.GENERAL,
            frequency=0.0,
            positive=False,
            function=self.laplacian_function,
            laplacian_function=_no_laplacian,
        )

    def scaled(self, factor: float) -> "ScalarField":
        """The field multiplied by a constant; solutions stay solutions"""
        function, laplacian = self.function, self.laplacian_function
        return replace(
            self,
            descriptor=f"{factor:g}*{self.descriptor}",
            positive=self.positive and factor > 0.0,
            function=lambda x1, x2: factor * function(x1, x2),
            laplacian_function=lambda x1, x2: factor * laplacian(x1, x2),
        )

    def pde_defect(self, x1, x2):
        """Laplacian minus what the declared equation prescribes (zero for exact solutions)"""
        value = self.evaluate(x1, x2)
        lap = self.laplacian(x1, x2)
        if self.kind is FieldKind.PANHARMONIC:
            return lap - self.frequency**2 * value
        if self.kind is FieldKind.HELMHOLTZ:
            return lap + self.frequency**2 * value
        if self.kind is FieldKind.HARMONIC:
            return lap
        return np.zeros_like(value)

    def serialize(self) -> str:
        """Serializes a ScalarField into its descriptor string"""
        return self.descriptor


def _no_laplacian(x1, x2):
    raise DataValidationError("The Laplacian of a Laplacian field is not tabulated")


def _unit(theta: float) -> tuple:
    return math.cos(theta), math.sin(theta)


######################################################################
#  P A N H A R M O N I C   F A M I L I E S
######################################################################
def plane_panharmonic(mu: float, direction_angle: float = 0.0) -> ScalarField:
    """Plane wave exp(mu x.d) with d = (cos theta, sin theta)"""
    if mu <= 0.0:
        raise DataValidationError(f"mu must be positive, got {mu}")
    d1, d2 = _unit(direction_angle)
    mu2 = mu * mu

    def function(x1, x2):
        return np.exp(mu * (d1 * x1 + d2 * x2))

    return ScalarField(
        descriptor=f"plane-mhh:mu={mu:g},theta={direction_angle:g}",
        kind=FieldKind.PANHARMONIC,
        frequency=mu,
        positive=True,
        function=function,
        laplacian_function=lambda x1, x2: mu2 * function(x1, x2),
    )


def radial_panharmonic(mu: float, center: Point) -> ScalarField:
    """Radial solution V(x) = I0(mu |x - c|), equal to one at its center"""
    if mu <= 0.0:
        raise DataValidationError(f"mu must be positive, got {mu}")
    mu2 = mu * mu

    def function(x1, x2):
        return bessel_I0(mu * np.hypot(x1 - center.x1, x2 - center.x2))

    return ScalarField(
        descriptor=f"radial-mhh:mu={mu:g},cx={center.x1:g},cy={center.x2:g}",
        kind=FieldKind.PANHARMONIC,
        frequency=mu,
        positive=True,
        function=function,
        laplacian_function=lambda x1, x2: mu2 * function(x1, x2),
    )


def separable_panharmonic(alpha: float, beta: float) -> ScalarField:
    """cosh(alpha x1) cosh(beta x2), panharmonic with mu = sqrt(alpha^2 + beta^2)"""
    if alpha == 0.0 and beta == 0.0:
        raise DataValidationError("alpha and beta must not both vanish")
    mu2 = alpha * alpha + beta * beta

    def function(x1, x2):
        return np.cosh(alpha * x1) * np.cosh(beta * x2)

    return ScalarField(
        descriptor=f"sep-mhh:alpha={alpha:g},beta={beta:g}",
        kind=FieldKind.PANHARMONIC,
        frequency=math.sqrt(mu2),
        positive=True,
        function=function,
        laplacian_function=lambda x1, x2: mu2 * function(x1, x2),
    )


######################################################################
#  H A R M O N I C   A N D   H E L M H O L T Z   F A M I L I E S
######################################################################
def harmonic_poly(k: int, part: str = "re") -> ScalarField:
    """Re or Im of (x1 + i x2)^k by the real recurrence

    p_k = x1 p_{k-1} - x2 q_{k-1},  q_k = x1 q_{k-1} + x2 p_{k-1}
    """
    if int(k) != k or not 0 <= k <= HARMONIC_MAX_DEGREE:
        raise DataValidationError(f"k must be an integer in [0, {HARMONIC_MAX_DEGREE}], got {k}")
    k = int(k)
    part = {"real": "re", "imaginary": "im"}.get(part, part)
    if part not in ("re", "im"):
        raise DataValidationError(f"part must be 're' or 'im', got {part!r}")

    def function(x1, x2):
        p, q = np.ones(np.broadcast(x1, x2).shape), np.zeros(np.broadcast(x1, x2).shape)
        for _ in range(k):
            p, q = x1 * p - x2 * q, x1 * q + x2 * p
        return p if part == "re" else q

    return ScalarField(
        descriptor=f"harm-poly:k={k},part={part}",
        kind=FieldKind.HARMONIC,
        frequency=0.0,
        positive=k == 0 and part == "re",
        function=function,
        laplacian_function=lambda x1, x2: np.zeros(np.broadcast(x1, x2).shape),
    )


def plane_helmholtz(lam: float, direction_angle: float = 0.0) -> ScalarField:
    """Plane wave cos(lambda x.d)"""
    if lam <= 0.0:
        raise DataValidationError(f"lambda must be positive, got {lam}")
    d1, d2 = _unit(direction_angle)
    lam2 = lam * lam

    def function(x1, x2):
        return np.cos(lam * (d1 * x1 + d2 * x2))

    return ScalarField(
        descriptor=f"plane-hh:lambda={lam:g},theta={direction_angle:g}",
        kind=FieldKind.HELMHOLTZ,
        frequency=lam,
        positive=False,
        function=function,
        laplacian_function=lambda x1, x2: -lam2 * function(x1, x2),
    )


def radial_helmholtz(lam: float, center: Point) -> ScalarField:
    """Radial solution U(x) = J0(lambda |x - c|)"""
    if lam <= 0.0:
        raise DataValidationError(f"lambda must be positive, got {lam}")
    lam2 = lam * lam

    def function(x1, x2):
        return bessel_J0(lam * np.hypot(x1 - center.x1, x2 - center.x2))

    return ScalarField(
        descriptor=f"radial-hh:lambda={lam:g},cx={center.x1:g},cy={center.x2:g}",
        kind=FieldKind.HELMHOLTZ,
        frequency=lam,
        positive=False,
        function=function,
        laplacian_function=lambda x1, x2: -lam2 * function(x1, x2),
    )


def quadratic_nonsolution() -> ScalarField:
    """w(x) = |x|^2 with Laplacian 4; solves none of the equations"""
    return ScalarField(
        descriptor="quad",
        kind=FieldKind.GENERAL,
        frequency=0.0,
        positive=False,
        function=lambda x1, x2: x1 * x1 + x2 * x2,
        laplacian_function=lambda x1, x2: np.full(np.broadcast(x1, x2).shape, 4.0),
    )


def constant_field(value: float = 1.0) -> ScalarField:
    """The constant harmonic function"""
    constant = harmonic_poly(0, "re")
    return constant if value == 1.0 else constant.scaled(value)


######################################################################
#  S P O T   C H E C K S
######################################################################
@dataclass(frozen=True)
class FieldCheck:
    """Outcome of the seeded PDE / positivity spot check"""

    descriptor: str
    max_relative_defect: float
    positivity_holds: bool

    def passed(self, tolerance: float = 1e-11) -> bool:
        """True when the PDE defect is within tolerance and positivity is honored"""
        return self.max_relative_defect <= tolerance and self.positivity_holds


def check_field(scalar_field: ScalarField, seed: int = 42, samples: int = 100, half_width: float = 2.0) -> FieldCheck:
    """Checks the declared equation and positivity at seeded random points of a square"""
    rng = np.random.default_rng(seed)
    x1, x2 = rng.uniform(-half_width, half_width, size=(2, samples))
    value = scalar_field.evaluate(x1, x2)
    lap = scalar_field.laplacian(x1, x2)
    scale = np.maximum(np.maximum(np.abs(value) * scalar_field.frequency**2, np.abs(lap)), 1.0)
    defect = float(np.max(np.abs(scalar_field.pde_defect(x1, x2)) / scale))
    positivity = bool(np.all(value > 0.0)) if scalar_field.positive else True
    logger.debug("Spot check %s: defect %.3e positivity %s", scalar_field.descriptor, defect, positivity)
    return FieldCheck(scalar_field.descriptor, defect, positivity)


######################################################################
#  D E S C R I P T O R S
######################################################################
FAMILIES = {
    "plane-mhh": (lambda p: plane_panharmonic(p["mu"], p["theta"]), {"mu": 1.0, "theta": 0.0}),
    "radial-mhh": (lambda p: radial_panharmonic(p["mu"], Point(p["cx"], p["cy"])), {"mu": 1.0, "cx": 0.0, "cy": 0.0}),
    "sep-mhh": (lambda p: separable_panharmonic(p["alpha"], p["beta"]), {"alpha": 1.0, "beta": 1.0}),
    "harm-poly": (lambda p: harmonic_poly(p["k"], p["part"]), {"k": 0, "part": "re"}),
    "plane-hh": (lambda p: plane_helmholtz(p["lambda"], p["theta"]), {"lambda": 1.0, "theta": 0.0}),
    "radial-hh": (lambda p: radial_helmholtz(p["lambda"], Point(p["cx"], p["cy"])), {"lambda": 1.0, "cx": 0.0, "cy": 0.0}),
    "quad": (lambda p: quadratic_nonsolution(), {}),
}


def parse_field_descriptor(text: str) -> ScalarField:
    """
    Builds a ScalarField from a descriptor such as ``radial-mhh:mu=1,cx=0,cy=0``

    Args:
        text (str): family name, optionally followed by ':' and key=value pairs
    """
    logger.info("Parsing field descriptor %s", text)
    try:
        family, _, arguments = text.strip().partition(":")
        constructor, defaults = FAMILIES[family]
        params = dict(defaults)
        for pair in filter(None, (item.strip() for item in arguments.split(","))):
            key, sep, raw = pair.partition("=")
            if not sep or key not in defaults:
                raise DataValidationError(f"Invalid parameter {pair!r} for field family {family!r}")
            params[key] = type(defaults[key])(raw) if not isinstance(defaults[key], float) else float(raw)
        return constructor(params)
    except KeyError as error:
        raise DataValidationError(f"Unknown field family: {error.args[0]!r}") from error
    except (TypeError, ValueError) as error:
        raise DataValidationError(f"Invalid field descriptor {text!r}: {error}") from error
    except AttributeError as error:
        raise DataValidationError(f"Invalid field descriptor: {text!r}") from error

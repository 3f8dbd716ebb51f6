"""
Models for discmeans

All of the shared value types, result records and the exception hierarchy
are stored in this module. Records know how to serialize themselves into
dictionaries (JSON output) and flat rows (CSV output).
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

logger = logging.getLogger(__name__)


######################################################################
#  E X C E P T I O N S
######################################################################
class DataValidationError(Exception):
    """Used for data validation errors when deserializing inputs"""


class ArgumentDomainError(DataValidationError):
    """Used when a special function argument leaves its supported range"""


class HypothesisError(Exception):
    """Used when the hypothesis of a theorem is not satisfied"""


class ComputationError(Exception):
    """Used for internal numerical faults that correct inputs cannot cause"""


######################################################################
#  P O I N T
######################################################################
@dataclass(frozen=True)
class Point:
    """A point (x1, x2) in the plane"""

    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise DataValidationError(f"Point coordinates must be finite: ({self.x1}, {self.x2})")

    def __repr__(self):
        return f"<Point ({self.x1:.6g}, {self.x2:.6g})>"

    def distance(self, other: "Point") -> float:
        """Euclidean distance to another point"""
        return math.hypot(self.x1 - other.x1, self.x2 - other.x2)

    def serialize(self) -> list:
        """Serializes a Point into a [x1, x2] list"""
        return [self.x1, self.x2]

    @classmethod
    def deserialize(cls, data) -> "Point":
        """
        Deserializes a Point from a two element sequence

        Args:
            data (list): the coordinates [x1, x2]
        """
        try:
            if isinstance(data, (str, bytes)) or len(data) != 2:
                raise DataValidationError(f"Invalid Point: expected two coordinates, got {data!r}")
            return cls(float(data[0]), float(data[1]))
        except (TypeError, ValueError) as error:
            raise DataValidationError(f"Invalid Point: {data!r}") from error


ORIGIN = Point(0.0, 0.0)


######################################################################
#  Q U A D R A T U R E   S P E C
######################################################################
@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution of every polar / fan quadrature in the package

    n_theta: angular nodes of the periodic trapezoidal rule
    n_radial_panels: geometrically graded radial panels
    radial_order: Gauss-Legendre points per radial panel
    grading: ratio between consecutive panel lengths toward the singular center
    """

    n_theta: int = 256
    n_radial_panels: int = 8
    radial_order: int = 16
    grading: float = 0.25

    def __post_init__(self):
        if int(self.n_theta) != self.n_theta or self.n_theta < 16 or self.n_theta % 2:
            raise DataValidationError(f"n_theta must be an even integer >= 16, got {self.n_theta}")
        if int(self.radial_order) != self.radial_order or not 2 <= self.radial_order <= 64:
            raise DataValidationError(f"radial_order must be in [2, 64], got {self.radial_order}")
        if int(self.n_radial_panels) != self.n_radial_panels or self.n_radial_panels < 1:
            raise DataValidationError(f"n_radial_panels must be >= 1, got {self.n_radial_panels}")
        if not 0.0 < self.grading < 1.0:
            raise DataValidationError(f"grading must lie in (0, 1), got {self.grading}")

    def refined(self) -> "QuadratureSpec":
        """Returns the once-refined spec used to measure the quadrature floor"""
        if self.radial_order * 2 <= 64:
            return replace(self, n_theta=self.n_theta * 2, radial_order=self.radial_order * 2)
        return replace(self, n_theta=self.n_theta * 2, n_radial_panels=self.n_radial_panels * 2)

    def serialize(self) -> dict:
        """Serializes a QuadratureSpec into a dictionary"""
        return {
            "n_theta": self.n_theta,
            "n_radial_panels": self.n_radial_panels,
            "radial_order": self.radial_order,
            "grading": self.grading,
        }

    @classmethod
    def deserialize(cls, data: dict) -> "QuadratureSpec":
        """Deserializes a QuadratureSpec, missing keys take the defaults"""
        try:
            return cls(
                n_theta=int(data.get("n_theta", cls.n_theta)),
                n_radial_panels=int(data.get("n_radial_panels", cls.n_radial_panels)),
                radial_order=int(data.get("radial_order", cls.radial_order)),
                grading=float(data.get("grading", cls.grading)),
            )
        except (AttributeError, TypeError, ValueError) as error:
            raise DataValidationError(f"Invalid QuadratureSpec: {error}") from error


@dataclass(frozen=True)
class MeanResult:
    """An integral mean together with the QuadratureSpec that produced it"""

    value: float
    spec_used: QuadratureSpec
    est_error: float = 0.0

    def __post_init__(self):
        if self.est_error < 0.0:
            raise DataValidationError("est_error must be nonnegative")

    def __float__(self):
        return float(self.value)

    def serialize(self) -> dict:
        """Serializes a MeanResult into a dictionary"""
        return {"value": self.value, "spec_used": self.spec_used.serialize(), "est_error": self.est_error}


######################################################################
#  I N V E R S E   T H E O R E M   R E C O R D S
######################################################################
class Theorem(Enum):
    """Which identity a residual report belongs to"""

    T2_UNWEIGHTED = "T2-unweighted"
    T4_PANHARMONIC = "T4-panharmonic"
    T5_HARMONIC = "T5-harmonic"
    T4_CERTIFICATE = "T4-certificate"


class Conclusion(Enum):
    """Outcome of the strict-sign deviation certificate"""

    CONSISTENT_WITH_DISC = "consistent-with-disc"
    NOT_A_DISC = "not-a-disc"
    INCONCLUSIVE = "inconclusive"


CSV_COLUMNS = ["theorem", "mu", "r", "area", "lhs", "rhs", "residual", "relative", "floor", "conclusion"]


@dataclass(frozen=True)
class ResidualReport:
    """Both sides of an inverse-theorem identity and their difference"""

    theorem: Theorem
    lhs: float
    rhs: float
    quadrature_floor: float = 0.0
    mu: float = 0.0
    r: float = 0.0
    area: float = 0.0

    def __post_init__(self):
        if self.quadrature_floor < 0.0:
            raise DataValidationError("quadrature_floor must be nonnegative")

    @property
    def residual(self) -> float:
        """rhs - lhs"""
        return self.rhs - self.lhs

    @property
    def relative(self) -> float:
        """|residual| relative to |lhs|"""
        return abs(self.residual) / max(abs(self.lhs), 1e-300)

    def serialize(self) -> dict:
        """Serializes a ResidualReport into a flat dictionary"""
        return {
            "theorem": self.theorem.value,
            "mu": self.mu,
            "r": self.r,
            "area": self.area,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "relative": self.relative,
            "floor": self.quadrature_floor,
            "conclusion": "",
        }


@dataclass(frozen=True)
class ThresholdPolicy:
    """How the certificate separates a signal from quadrature noise"""

    absolute: float = 1e-8
    floor_factor: float = 10.0

    def threshold(self, quadrature_floor: float) -> float:
        """Returns max(floor_factor * floor, absolute)"""
        return max(self.floor_factor * quadrature_floor, self.absolute)


@dataclass(frozen=True)
class SignCertificate:
    """Deviation of the radial weighted integral from its disc value"""

    deviation: float
    conclusion: Conclusion
    threshold: float
    disc_value: float = 0.0
    quadrature_floor: float = 0.0
    mu: float = 0.0
    r: float = 0.0
    area: float = 0.0

    def __post_init__(self):
        if self.threshold <= 0.0:
            raise DataValidationError("threshold must be positive")

    @classmethod
    def classify(cls, deviation: float, threshold: float, **kwargs) -> "SignCertificate":
        """Builds a certificate, deriving the conclusion from the deviation"""
        if abs(deviation) <= threshold:
            conclusion = Conclusion.CONSISTENT_WITH_DISC
        elif deviation < -threshold:
            conclusion = Conclusion.NOT_A_DISC
        else:
            # a positive deviation is impossible in exact arithmetic
            logger.warning("Positive deviation %.3e above threshold %.3e", deviation, threshold)
            conclusion = Conclusion.INCONCLUSIVE
        return cls(deviation=deviation, conclusion=conclusion, threshold=threshold, **kwargs)

    def serialize(self) -> dict:
        """Serializes a SignCertificate into the report row layout"""
        return {
            "theorem": Theorem.T4_CERTIFICATE.value,
            "mu": self.mu,
            "r": self.r,
            "area": self.area,
            "lhs": self.disc_value,
            "rhs": self.disc_value + self.deviation,
            "residual": self.deviation,
            "relative": abs(self.deviation) / max(abs(self.disc_value), 1e-300),
            "floor": self.quadrature_floor,
            "conclusion": self.conclusion.value,
        }


@dataclass(frozen=True)
class RecoveryResult:
    """Disc parameters fitted by recover_disc"""

    center: Point
    radius: float
    final_residual: float
    iterations: int
    converged: bool
    evaluations: int = 0

    def serialize(self) -> dict:
        """Serializes a RecoveryResult into a dictionary"""
        return {
            "center": self.center.serialize(),
            "radius": self.radius,
            "final_residual": self.final_residual,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }

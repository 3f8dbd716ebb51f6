"""
Special functions for the mean value identities

Power series for the Bessel functions I0, I1, J0, J1 and the four mean value
coefficients a°, a•, a, ã built from them, integral representations used to
cross-check the series, and the first positive zero of J1.

Every function accepts a float or a numpy array and returns the same shape
(a plain float for scalar input). Series are summed with Kahan compensation
and truncated once a term drops below SERIES_RTOL times the partial sum.

The J series suffer cancellation that grows like exp(t): about 1e-12 relative
accuracy up to t ~ 8, degrading to roughly 1e-4 absolute at T_MAX.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import optimize

from discmeans.models import ArgumentDomainError, ComputationError

logger = logging.getLogger(__name__)

T_MAX = 30.0
SERIES_RTOL = 1e-17
SERIES_MAX_TERMS = 120

# below these arguments the coefficients use division-free series
SMALL_T_BULLET = 0.5
SMALL_T_WEIGHTED = 1.0

INTEGRAL_TOL = 1e-13
INTEGRAL_MAX_NODES = 1 << 16

J1_BRACKET = (3.0, 4.5)
J1_ZERO_XTOL = 1e-12


######################################################################
#  U T I L I T Y   F U N C T I O N S
######################################################################
def _argument(t, lower: float) -> tuple:
    """Returns (t as float array, was_scalar), checking lower <= t <= T_MAX"""
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr > T_MAX) or np.any(arr < lower):
        raise ArgumentDomainError(f"Argument outside the supported range [{lower:g}, {T_MAX:g}]: {t}")
    return np.atleast_1d(arr), arr.ndim == 0


def _finish(values: np.ndarray, scalar: bool):
    if scalar:
        return float(values[0])
    return values


def _power_series(first: np.ndarray, q: np.ndarray, a: int, b: int) -> np.ndarray:
    """Sums first * sum_k prod_{j<=k} q / ((j + a)(j + b)) with Kahan compensation

    Covers every series in this module: q = ±(t/2)^2 and the shifts (a, b)
    select I0/J0 (0, 0), I1/J1 and 2I1(t)/t (0, 1), and the weighted
    coefficients (1, 1).
    """
    term = np.array(first, dtype=float)
    total = term.copy()
    carry = np.zeros_like(total)
    for k in range(1, SERIES_MAX_TERMS):
        term = term * q / ((k + a) * (k + b))
        y = term - carry
        s = total + y
        carry = (s - total) - y
        total = s
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return total
    raise ComputationError(f"Series did not converge within {SERIES_MAX_TERMS} terms")


def _quarter_square(arr: np.ndarray) -> np.ndarray:
    return 0.25 * arr * arr


######################################################################
#  B E S S E L   F U N C T I O N S
######################################################################
def bessel_I0(t):
    """Modified Bessel function I0 by its power series"""
    arr, scalar = _argument(t, -T_MAX)
    return _finish(_power_series(np.ones_like(arr), _quarter_square(arr), 0, 0), scalar)


def bessel_I1(t):
    """Modified Bessel function I1 by its power series"""
    arr, scalar = _argument(t, -T_MAX)
    return _finish(_power_series(0.5 * arr, _quarter_square(arr), 0, 1), scalar)


def bessel_J0(t):
    """Bessel function J0 by its alternating power series"""
    arr, scalar = _argument(t, -T_MAX)
    return _finish(_power_series(np.ones_like(arr), -_quarter_square(arr), 0, 0), scalar)


def bessel_J1(t):
    """Bessel function J1 by its alternating power series"""
    arr, scalar = _argument(t, -T_MAX)
    return _finish(_power_series(0.5 * arr, -_quarter_square(arr), 0, 1), scalar)


######################################################################
#  M E A N   V A L U E   C O E F F I C I E N T S
######################################################################
def coeff_a_circ(t):
    """Circle mean coefficient a°(t) = I0(t)"""
    _argument(t, 0.0)
    return bessel_I0(t)


def _ratio_branch(t, threshold: float, sign: float, shifts: tuple, closed_form):
    """Evaluates a coefficient by series below threshold and closed_form above"""
    arr, scalar = _argument(t, 0.0)
    out = np.empty_like(arr)
    small = arr < threshold
    if np.any(small):
        q = sign * _quarter_square(arr[small])
        first = np.full(q.shape, 1.0 if shifts == (0, 1) else 0.5)
        out[small] = _power_series(first, q, *shifts)
    if np.any(~small):
        out[~small] = closed_form(arr[~small])
    return _finish(out, scalar)


def coeff_a_bullet(t):
    """Disc mean coefficient a•(t) = 2 I1(t) / t, with a•(0) = 1"""
    return _ratio_branch(t, SMALL_T_BULLET, 1.0, (0, 1), lambda x: 2.0 * bessel_I1(x) / x)


def coeff_a(t):
    """Weighted disc mean coefficient a(t) = 2 [I0(t) - 1] / t^2, with a(0) = 1/2"""
    return _ratio_branch(t, SMALL_T_WEIGHTED, 1.0, (1, 1), lambda x: 2.0 * (bessel_I0(x) - 1.0) / (x * x))


def coeff_a_tilde(t):
    """Helmholtz weighted coefficient ã(t) = 2 [1 - J0(t)] / t^2, with ã(0) = 1/2"""
    return _ratio_branch(t, SMALL_T_WEIGHTED, -1.0, (1, 1), lambda x: 2.0 * (1.0 - bessel_J0(x)) / (x * x))


def coeff_a_circ_helmholtz(t):
    """Helmholtz circle mean coefficient J0(t)"""
    _argument(t, 0.0)
    return bessel_J0(t)


def coeff_a_bullet_helmholtz(t):
    """Helmholtz disc mean coefficient 2 J1(t) / t; it changes sign at j_{1,1}"""
    return _ratio_branch(t, SMALL_T_BULLET, -1.0, (0, 1), lambda x: 2.0 * bessel_J1(x) / x)


######################################################################
#  I N T E G R A L   R E P R E S E N T A T I O N S
######################################################################
def _midpoint_mean(integrand, arr: np.ndarray, half_period: float) -> np.ndarray:
    """Mean of a smooth periodic integrand over [0, half_period], doubling nodes until stable

    Returns (1/N) sum_j integrand(arr, theta_j) for the N-point midpoint rule.
    """
    results = np.empty_like(arr)
    for i, value in enumerate(arr):
        n_nodes = 8
        previous = None
        while True:
            theta = (np.arange(n_nodes) + 0.5) * (half_period / n_nodes)
            current = math.fsum(integrand(value, theta)) / n_nodes
            if previous is not None and abs(current - previous) <= INTEGRAL_TOL * max(1.0, abs(current)):
                break
            if n_nodes >= INTEGRAL_MAX_NODES:
                raise ComputationError(f"Midpoint rule did not stabilize for t={value}")
            previous = current
            n_nodes *= 2
        results[i] = current
    return results


def poisson_I0(t):
    """I0 from Poisson's integral (2/pi) int_0^{pi/2} cosh(t cos theta) d theta"""
    arr, scalar = _argument(t, 0.0)
    values = _midpoint_mean(lambda x, theta: np.cosh(x * np.cos(theta)), arr, 0.5 * math.pi)
    return _finish(values, scalar)


def bessel_integral_J0(t):
    """J0 from Bessel's integral (1/pi) int_0^pi cos(t sin theta) d theta"""
    arr, scalar = _argument(t, 0.0)
    values = _midpoint_mean(lambda x, theta: np.cos(x * np.sin(theta)), arr, math.pi)
    return _finish(values, scalar)


@lru_cache(maxsize=None)
def first_zero_J1() -> float:
    """First positive zero j_{1,1} of J1, by bisection on J1_BRACKET"""
    try:
        root = optimize.bisect(bessel_J1, *J1_BRACKET, xtol=J1_ZERO_XTOL)
    except ValueError as error:
        logger.error("No sign change of J1 in %s", J1_BRACKET)
        raise ComputationError(f"J1 has no sign change in {J1_BRACKET}") from error
    logger.debug("j_{1,1} = %.15f", root)
    return root

"""Analytic Gaussian mechanism calibration."""

import logging
import math

import numpy as np
from scipy.special import log_ndtr, ndtr

from ldpbayes.utils.errors import (
    InvalidParameterError,
    NumericFailureError,
    UnsupportedBudgetError,
)

logger = logging.getLogger(__name__)

SIGMA_TOLERANCE = 1e-12
MAX_EXPANSIONS = 60


def gaussian_privacy_profile(delta2, sigma, epsilon):
    """Tight delta reached by N(0, sigma^2) noise at L2 sensitivity `delta2`."""
    if not delta2 > 0 or not sigma > 0:
        raise InvalidParameterError("sensitivity and sigma must be > 0")
    if epsilon < 0:
        raise InvalidParameterError("epsilon must be >= 0")
    if math.isinf(epsilon) or math.isinf(sigma):
        return 0.0
    ratio = delta2 / (2.0 * sigma)
    shift = epsilon * sigma / delta2
    # e^eps * Phi(.) evaluated in log space so large epsilon cannot overflow
    tail = np.exp(epsilon + log_ndtr(-ratio - shift))
    return float(ndtr(ratio - shift) - tail)


def calibrate_gaussian(delta2, budget):
    """Smallest sigma whose privacy profile does not exceed budget.delta.

    Bisection on the profile, which decreases monotonically in sigma; the
    starting bracket [delta2 * 1e-3, delta2 * 1e3] widens geometrically until
    it holds the root.
    """
    epsilon, delta = budget.epsilon, budget.delta
    if not delta2 > 0:
        raise InvalidParameterError(f"sensitivity must be > 0, got {delta2}")
    if delta == 0.0:
        raise UnsupportedBudgetError("the Gaussian mechanism cannot give pure DP (delta = 0)")
    if not delta < 1.0:
        raise InvalidParameterError("delta must be < 1 for Gaussian calibration")
    if math.isinf(epsilon):
        raise InvalidParameterError("infinite epsilon needs no noise; use a noiseless release")

    def excess(sigma):
        return gaussian_privacy_profile(delta2, sigma, epsilon) - delta

    lo, hi = delta2 * 1e-3, delta2 * 1e3
    for _ in range(MAX_EXPANSIONS):
        if excess(lo) > 0:
            break
        lo /= 10.0
    else:
        raise NumericFailureError("could not bracket sigma from below")
    for _ in range(MAX_EXPANSIONS):
        if excess(hi) <= 0:
            break
        hi *= 10.0
    else:
        raise NumericFailureError("could not bracket sigma from above")

    # invariant: excess(lo) > 0 >= excess(hi)
    while hi - lo > SIGMA_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    logger.debug("calibrated sigma=%.6g for sensitivity=%g eps=%g delta=%g", hi, delta2, epsilon, delta)
    return hi

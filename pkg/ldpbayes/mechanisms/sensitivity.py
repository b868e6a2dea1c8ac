"""L2 sensitivities of the regression releases and per-block noise calibration."""

import math

from ldpbayes.mechanisms.calibration import calibrate_gaussian
from ldpbayes.mechanisms.models import SensitivityInputs, StatisticPerturbation
from ldpbayes.mechanisms.statistics import statistic_blocks
from ldpbayes.utils.errors import InvalidParameterError


def sens_linreg(s):
    """Sensitivity of the linear-regression statistic scaled to common noise sigma1.

    Blocks x x^T, x y and y^2 carry noise stds sigma1, sigma2 and sigma3; the
    bound maximizes the squared distance over <x, x'> in closed form.
    """
    c1 = s.sigma1**2 / s.sigma2**2
    c2 = s.sigma1**2 / s.sigma3**2
    return math.sqrt(
        c1**2 * s.Ry**4 / 2.0
        + 2.0 * s.R**4
        + 2.0 * c1 * s.Ry**2 * s.R**2
        + c2 * s.Ry**4
    )


def sens_logreg_ss(R, sigma1, sigma2):
    """Sensitivity of the logistic statistic; sigma1 on y x, sigma2 on x x^T."""
    if not (R > 0 and sigma1 > 0 and sigma2 > 0):
        raise InvalidParameterError("R, sigma1 and sigma2 must be > 0")
    return math.sqrt(
        sigma2**2 / (2.0 * sigma1**2) + 2.0 * R**2 + 2.0 * sigma1**2 * R**4 / sigma2**2
    )


def optimal_logreg_noise_ratio(R):
    """sigma2 / sigma1 minimizing `sens_logreg_ss`; the minimum equals 2R."""
    return math.sqrt(2.0) * R


def sens_input_x(R):
    if not R > 0:
        raise InvalidParameterError("R must be > 0")
    return 2.0 * R


def sens_input_y(Ry):
    """Label release for |y| <= Ry."""
    if not Ry > 0:
        raise InvalidParameterError("Ry must be > 0")
    return 2.0 * Ry


def calibrate_statistic(layout, d, budget, R=1.0, Ry=1.0, ratios=None):
    """Per-coordinate noise for the sufficient-statistic release.

    Both sensitivities are invariant to scaling all block stds together, so
    the bound is evaluated at sigma1 = 1 with the configured ratios and the
    Gaussian calibration then fixes sigma1.

    linear ratios: (sigma2 / sigma1, sigma3 / sigma1), default (1, 1)
    logistic ratios: (sigma2 / sigma1,), default (1,)
    """
    if layout == "linear":
        r2, r3 = ratios or (1.0, 1.0)
        sensitivity = sens_linreg(SensitivityInputs(R, Ry, 1.0, r2, r3))
        sigma1 = calibrate_gaussian(sensitivity, budget)
        per_block = {"xx": sigma1, "xy": r2 * sigma1, "yy": r3 * sigma1}
    elif layout == "logistic":
        (r2,) = ratios or (1.0,)
        sensitivity = sens_logreg_ss(R, 1.0, r2)
        sigma1 = calibrate_gaussian(sensitivity, budget)
        per_block = {"xx": r2 * sigma1, "xy": sigma1}
    else:
        raise InvalidParameterError(f"unknown statistic layout {layout!r}")
    noise = tuple(per_block[block] for block in statistic_blocks(d, layout))
    return StatisticPerturbation(layout, d, noise)

import numpy as np
import pytest
from scipy.special import expit

from ldpbayes.approx import (
    ChebCoeffs,
    cheb_fit_sigmoid,
    sigmoid_expectation,
    surrogate_expectation,
    surrogate_quality,
)
from ldpbayes.approx.chebyshev import chebyshev_fit
from ldpbayes.utils.errors import InvalidParameterError


def test_chebyshev_fit_recovers_quadratic():
    coef = chebyshev_fit(lambda t: 1.0 + 2.0 * t - 3.0 * t**2, (-2.0, 5.0), 2)
    np.testing.assert_allclose(coef, [1.0, 2.0, -3.0], atol=1e-10)


def test_symmetric_interval_keeps_odd_part():
    cheb = cheb_fit_sigmoid((-4.0, 4.0))
    assert cheb.b0 == 0.5
    assert cheb.b2 == 0.0
    assert 0.0 < cheb.b1 < 0.25


def test_asymmetric_interval_has_curvature():
    cheb = cheb_fit_sigmoid((-2.0, 6.0))
    assert cheb.b2 < 0.0
    assert cheb.max_error() < 0.15


def test_wider_interval_flattens_slope():
    assert cheb_fit_sigmoid((-8.0, 8.0)).b1 < cheb_fit_sigmoid((-2.0, 2.0)).b1


def test_only_quadratic_surrogate():
    with pytest.raises(InvalidParameterError):
        cheb_fit_sigmoid(degree=3)
    with pytest.raises(InvalidParameterError):
        ChebCoeffs(0.5, 0.2, 0.0, (1.0, 1.0))


def test_surrogate_expectation_formula():
    cheb = ChebCoeffs(0.4, 0.2, -0.01, (-3.0, 5.0))
    h = np.array([0.3, -0.7])
    A = np.array([[0.5, 0.1], [0.1, 0.2]])
    theta = np.array([1.0, 2.0])
    mean = h @ theta
    var = theta @ A @ theta
    expected = 0.4 + 0.2 * mean - 0.01 * (var + mean**2)
    assert float(surrogate_expectation(h, A, theta, cheb)) == pytest.approx(expected)


def test_sigmoid_expectation_limits():
    assert sigmoid_expectation(0.8, 0.0) == pytest.approx(expit(0.8))
    assert sigmoid_expectation(0.0, 9.0) == pytest.approx(0.5)


def test_sigmoid_expectation_against_monte_carlo():
    rng = np.random.default_rng(0)
    draws = expit(rng.normal(1.2, 2.0, size=400_000))
    se = draws.std() / np.sqrt(len(draws))
    assert abs(sigmoid_expectation(1.2, 4.0) - draws.mean()) < 5 * se


def test_surrogate_quality_is_small():
    rng = np.random.default_rng(1)
    quality = surrogate_quality(cheb_fit_sigmoid(), rng, d=2, repeats=40)
    assert 0.0 <= quality < 0.1

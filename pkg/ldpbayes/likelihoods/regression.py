"""Regression likelihoods when features and labels are perturbed separately.

With x ~ N(0, Sigma) released as z_x = x + N(0, Sigma*), the latent x given
z_x is Gaussian with mean h = Sigma (Sigma + Sigma*)^{-1} z_x and covariance
A = Sigma - Sigma (Sigma + Sigma*)^{-1} Sigma, shared by every record.
"""

import jax.numpy as jnp
from jax.nn import log_sigmoid
from jax.scipy.linalg import cho_solve
from jax.scipy.stats import norm

from ldpbayes.approx.chebyshev import surrogate_expectation
from ldpbayes.likelihoods.models import PosteriorNoiseGeometry
from ldpbayes.likelihoods.numerics import cholesky, mvn_logpdf, mvn_logpdf_from_factor

CLAMP = 1e-6


def _geometry(zx, Sigma, SigmaStar):
    factor = cholesky(Sigma + SigmaStar)
    gain = cho_solve((factor, True), Sigma)
    A = Sigma - Sigma @ gain
    return PosteriorNoiseGeometry(zx @ gain, 0.5 * (A + A.T)), factor


def noise_geometry(zx, Sigma, SigmaStar):
    return _geometry(jnp.asarray(zx, dtype=float), Sigma, SigmaStar)[0]


def linreg_input_loglik(zx, zy, params, SigmaStar, sigmaStarY):
    zx = jnp.asarray(zx, dtype=float)
    single = zx.ndim == 1
    rows = jnp.atleast_2d(zx)
    geometry, factor = _geometry(rows, params.Sigma, SigmaStar)

    log_x = jnp.atleast_1d(mvn_logpdf_from_factor(rows, 0.0, factor))
    theta = params.theta
    mean_y = geometry.h @ theta
    var_y = theta @ geometry.A @ theta + params.sigma**2 + sigmaStarY**2
    log_y = norm.logpdf(jnp.atleast_1d(zy), mean_y, jnp.sqrt(var_y))
    out = log_x + log_y
    return out[0] if single else out


def logreg_input_loglik(zx, zy, params, SigmaStar, p, cheb):
    """Features under Gaussian noise, labels under randomized response with keep probability p."""
    zx = jnp.asarray(zx, dtype=float)
    single = zx.ndim == 1
    rows = jnp.atleast_2d(zx)
    geometry, factor = _geometry(rows, params.Sigma, SigmaStar)

    log_x = jnp.atleast_1d(mvn_logpdf_from_factor(rows, 0.0, factor))
    positive = jnp.clip(
        surrogate_expectation(geometry.h, geometry.A, params.theta, cheb), CLAMP, 1.0 - CLAMP
    )
    zy = jnp.atleast_1d(zy)
    label = jnp.where(
        zy == 1,
        p * positive + (1.0 - p) * (1.0 - positive),
        (1.0 - p) * positive + p * (1.0 - positive),
    )
    out = log_x + jnp.log(label)
    return out[0] if single else out


def surrogate_clamp_rate(zx, params, SigmaStar, cheb):
    """Fraction of records whose surrogate expectation leaves [CLAMP, 1 - CLAMP]."""
    geometry = noise_geometry(zx, params.Sigma, SigmaStar)
    value = surrogate_expectation(geometry.h, geometry.A, params.theta, cheb)
    return float(jnp.mean((value < CLAMP) | (value > 1.0 - CLAMP)))


def linreg_exact_loglik(x, y, params):
    """Non-private N(x; 0, Sigma) N(y; x^T theta, sigma^2), row-wise."""
    log_x = jnp.atleast_1d(mvn_logpdf(jnp.atleast_2d(x), 0.0, params.Sigma))
    return log_x + norm.logpdf(y, jnp.atleast_2d(x) @ params.theta, params.sigma)


def logreg_exact_loglik(x, y, params):
    """Non-private N(x; 0, Sigma) Bernoulli(y; sigmoid(x^T theta)), row-wise."""
    rows = jnp.atleast_2d(x)
    log_x = jnp.atleast_1d(mvn_logpdf(rows, 0.0, params.Sigma))
    logits = rows @ params.theta
    return log_x + y * log_sigmoid(logits) + (1.0 - y) * log_sigmoid(-logits)

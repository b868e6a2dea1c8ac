"""Marginals of polynomial-times-Gaussian kernels under Gaussian noise.

For a latent x on [a, b] with unnormalized density g(x) exp(h(x) / (2 sigma^2)),
g a polynomial and h quadratic, the noisy release z = x + N(0, sigma^2) has a
marginal built from non-central moments of a truncated normal.
"""

import jax.numpy as jnp
from jax.scipy.stats import norm

from ldpbayes.likelihoods.numerics import LOG_2PI, is_concrete, log_ndtr_diff
from ldpbayes.utils.errors import InvalidParameterError


def truncated_normal_moments(m, s, a, b, order):
    """E[x^j], j = 0..order, for N(m, s^2) truncated to [a, b].

    M_k = (k - 1) s^2 M_{k-2} + m M_{k-1} - s (b^{k-1} phi(beta) - a^{k-1} phi(alpha)) / Z
    """
    alpha, beta = (a - m) / s, (b - m) / s
    log_mass = log_ndtr_diff(beta, alpha)
    # phi / Z kept in log space; both underflow far in the tails
    ratio_a = jnp.exp(norm.logpdf(alpha) - log_mass)
    ratio_b = jnp.exp(norm.logpdf(beta) - log_mass)
    moments = [jnp.ones_like(log_mass * m), m - s * (ratio_b - ratio_a)]
    for k in range(2, order + 1):
        edge = b ** (k - 1) * ratio_b - a ** (k - 1) * ratio_a
        moments.append((k - 1) * s**2 * moments[k - 2] + m * moments[k - 1] - s * edge)
    return jnp.stack(moments[: order + 1])


def poly_gauss_marginal(g, h, sigma, z, bounds):
    """int_a^b g(x) exp(h(x) / (2 sigma^2)) N(z; x, sigma^2) dx.

    g holds polynomial coefficients in increasing degree; h = (h0, h1, h2).
    The caller multiplies by the prior's normalizing constant.
    """
    g = jnp.asarray(g, dtype=float)
    h0, h1, h2 = (jnp.asarray(c, dtype=float) for c in h)
    if is_concrete(h2) and not bool(h2 < 1.0):
        raise InvalidParameterError("h2 must be < 1 for an integrable kernel")
    var = sigma**2 / (1.0 - h2)
    mean = (2.0 * z + h1) / (2.0 * (1.0 - h2))
    s = jnp.sqrt(var)

    log_scale = (
        -0.5 * (LOG_2PI + 2.0 * jnp.log(sigma))
        + 0.5 * (LOG_2PI + jnp.log(var))
        + ((1.0 - h2) * mean**2 - z**2 + h0) / (2.0 * sigma**2)
    )
    log_mass = log_ndtr_diff((bounds.b - mean) / s, (bounds.a - mean) / s)
    moments = truncated_normal_moments(mean, s, bounds.a, bounds.b, len(g) - 1)
    return jnp.exp(log_scale + log_mass) * jnp.dot(g, moments)

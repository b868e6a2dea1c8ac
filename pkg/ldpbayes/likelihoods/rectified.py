"""Marginal densities of clipped scalars released through the Laplace mechanism.

A clipped draw has a continuous part on [a, b] plus point masses at the
bounds. Convolving with Laplace noise of rate lambda = epsilon / (b - a)
gives a closed form with four terms (two atoms and the continuous part split
at l = clip(z, a, b)), combined here with logsumexp.
"""

import jax.numpy as jnp
from jax.scipy.special import log_ndtr, logsumexp
from jax.scipy.stats import norm

from ldpbayes.likelihoods.numerics import log1mexp, log_exprel, log_ndtr_interval


def rect_gauss_loglik(z, params):
    mu, sigma = params.mu, params.sigma
    a, b = params.bounds.a, params.bounds.b
    z = jnp.asarray(z, dtype=float)
    rate = params.epsilon / (b - a)
    l = jnp.clip(z, a, b)

    lower_atom = log_ndtr((a - mu) / sigma) - rate * jnp.abs(z - a)
    upper_atom = log_ndtr((mu - b) / sigma) - rate * jnp.abs(z - b)

    # Gaussian tilted by e^{+-rate x}: mean moves by rate * sigma^2
    shift = rate * sigma**2
    spread = 0.5 * (rate * sigma) ** 2
    left = (
        rate * (mu - z)
        + spread
        + log_ndtr_interval((l - mu - shift) / sigma, (a - mu - shift) / sigma, l <= a)
    )
    right = (
        rate * (z - mu)
        + spread
        + log_ndtr_interval((b - mu + shift) / sigma, (l - mu + shift) / sigma, l >= b)
    )
    terms = jnp.stack([lower_atom, upper_atom, left, right])
    return jnp.log(0.5 * rate) + logsumexp(terms, axis=0)


def rect_gauss_exact_loglik(x, mu, sigma, bounds):
    """Non-private log-density of a clipped N(mu, sigma^2) observation."""
    x = jnp.asarray(x, dtype=float)
    inside = norm.logpdf(x, mu, sigma)
    return jnp.where(
        x <= bounds.a,
        log_ndtr((bounds.a - mu) / sigma),
        jnp.where(x >= bounds.b, log_ndtr((mu - bounds.b) / sigma), inside),
    )


def rect_exp_loglik(z, params):
    theta, b = params.theta, params.b
    z = jnp.asarray(z, dtype=float)
    rate = params.epsilon / b
    l = jnp.clip(z, 0.0, b)

    # int_0^l e^{rate (x - z)} theta e^{-theta x} dx
    lower_empty = l <= 0.0
    l_safe = jnp.where(lower_empty, 1.0, l)
    left = (
        jnp.log(theta)
        - rate * z
        + jnp.log(l_safe)
        + log_exprel((rate - theta) * l_safe)
    )
    left = jnp.where(lower_empty, -jnp.inf, left)

    # int_l^b e^{rate (z - x)} theta e^{-theta x} dx
    upper_empty = l >= b
    gap = jnp.where(upper_empty, 1.0, b - l)
    total = rate + theta
    right = (
        jnp.log(theta)
        + rate * z
        - total * l
        + log1mexp(-total * gap)
        - jnp.log(total)
    )
    right = jnp.where(upper_empty, -jnp.inf, right)

    atom = -theta * b - rate * jnp.abs(z - b)
    terms = jnp.stack([left, right, atom])
    return jnp.log(0.5 * rate) + logsumexp(terms, axis=0)


def rect_exp_exact_loglik(x, theta, b):
    """Non-private log-density of an Exp(theta) draw clipped at b."""
    x = jnp.asarray(x, dtype=float)
    return jnp.where(x >= b, -theta * b, jnp.log(theta) - theta * x)

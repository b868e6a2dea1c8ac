"""Bijections from the sampler's unconstrained space to model parameters.

Each forward map returns the constrained value and log|det J| of the map
onto the free coordinates of the constrained value (the first d - 1
simplex components, the upper triangle of a covariance). The maps are the
ones numpyro's `biject_to` assigns to each support, so a point the sampler
visits constrains the same way here.
"""

import math

import jax.numpy as jnp
from numpyro.distributions import constraints
from numpyro.distributions.transforms import biject_to

from ldpbayes.utils.errors import InvalidParameterError

_stick = biject_to(constraints.simplex)
_exp = biject_to(constraints.positive)
_corr = biject_to(constraints.corr_cholesky)


def transform_simplex(v):
    """Centered stick-breaking: d - 1 free values to a point on the d-simplex."""
    v = jnp.asarray(v, dtype=float)
    theta = _stick(v)
    return theta, _stick.log_abs_det_jacobian(v, theta)


def inverse_simplex(theta):
    return _stick.inv(jnp.asarray(theta, dtype=float))


def transform_positive(v):
    v = jnp.asarray(v, dtype=float)
    return _exp(v), jnp.sum(v)


def inverse_positive(x):
    return jnp.log(jnp.asarray(x, dtype=float))


def transform_corr_cholesky(v):
    """Free values to the Cholesky factor of a correlation matrix."""
    v = jnp.asarray(v, dtype=float)
    L = _corr(v)
    return L, _corr.log_abs_det_jacobian(v, L)


def _split_covariance(v, d):
    corr_dim = d * (d - 1) // 2
    return v[:corr_dim], v[corr_dim:]


def transform_covariance(v, d):
    """Sigma = diag(tau) L L^T diag(tau), L from CorrCholesky, tau = exp(log_tau).

    The Jacobian chains three maps: free values to the correlation Cholesky
    factor, its strict lower entries to Omega = L L^T (diagonal L_jj once per
    row below j), and (Omega, tau) to the upper triangle of Sigma.
    """
    v = jnp.asarray(v, dtype=float)
    corr_free, log_tau = _split_covariance(v, d)
    tau = jnp.exp(log_tau)
    if d == 1:
        L = jnp.ones((1, 1))
        log_det = 0.0
    else:
        L, log_det = transform_corr_cholesky(corr_free)
        rows_below = jnp.arange(d - 1, -1, -1)
        log_det = log_det + jnp.sum(rows_below * jnp.log(jnp.diag(L)))
    scaled = tau[:, None] * L
    Sigma = scaled @ scaled.T
    log_det = log_det + (d + 1) * jnp.sum(log_tau) + d * math.log(2.0)
    return Sigma, log_det


def inverse_covariance(Sigma):
    Sigma = jnp.asarray(Sigma, dtype=float)
    d = Sigma.shape[-1]
    tau = jnp.sqrt(jnp.diag(Sigma))
    if d == 1:
        return jnp.log(tau)
    Omega = Sigma / jnp.outer(tau, tau)
    L = jnp.linalg.cholesky(Omega)
    return jnp.concatenate([_corr.inv(L), jnp.log(tau)])


def upper_triangle(Sigma):
    d = Sigma.shape[-1]
    rows, cols = jnp.triu_indices(d)
    return Sigma[rows, cols]


def _base(support):
    while isinstance(support, constraints.independent):
        support = support.base_constraint
    return support


def transform_site(support, v):
    """Constrained value and log|J| for one sampled site with the given support."""
    base = _base(support)
    if base is constraints.simplex:
        return transform_simplex(v)
    if base is constraints.positive:
        return transform_positive(v)
    if base is constraints.corr_cholesky:
        return transform_corr_cholesky(v)
    if base is constraints.real or base is constraints.real_vector:
        return jnp.asarray(v, dtype=float), jnp.zeros(())
    raise InvalidParameterError(f"no transform for support {support}")

"""Log-space helpers shared by the closed-form likelihoods.

Every helper is differentiable with JAX. Branches that would produce NaN
gradients are evaluated on safe placeholder inputs and masked afterwards.
"""

import math

import jax
import jax.numpy as jnp
from jax.scipy.linalg import solve_triangular
from jax.scipy.special import log_ndtr

from ldpbayes.utils.errors import DecompositionError

LOG_2PI = math.log(2.0 * math.pi)
_LOG2 = math.log(2.0)
_SERIES_CUTOFF = 1e-6


def is_concrete(*values):
    """True when none of the values is being traced by a JAX transformation."""
    leaves = jax.tree_util.tree_leaves(values)
    return not any(isinstance(v, jax.core.Tracer) for v in leaves)


def log1mexp(x):
    """log(1 - e^x) for x < 0."""
    return jnp.where(x > -_LOG2, jnp.log(-jnp.expm1(x)), jnp.log1p(-jnp.exp(x)))


def log_ndtr_diff(upper, lower):
    """log(Phi(upper) - Phi(lower)) for upper > lower, stable in both tails."""
    flip = lower > 0
    hi = jnp.where(flip, -lower, upper)
    lo = jnp.where(flip, -upper, lower)
    log_hi = log_ndtr(hi)
    return log_hi + log1mexp(log_ndtr(lo) - log_hi)


def log_ndtr_interval(upper, lower, empty):
    """Like `log_ndtr_diff`, but -inf wherever the data mask `empty` is set."""
    safe_upper = jnp.where(empty, lower + 1.0, upper)
    return jnp.where(empty, -jnp.inf, log_ndtr_diff(safe_upper, lower))


def log_exprel(x):
    """log((e^x - 1) / x), continuous through the removable point x = 0."""
    small = jnp.abs(x) < _SERIES_CUTOFF
    pos = jnp.where(x > 0, x, 1.0)
    neg = jnp.where(x < 0, x, -1.0)
    above = pos + log1mexp(-pos) - jnp.log(pos)
    below = jnp.log(-jnp.expm1(neg)) - jnp.log(-neg)
    series = x / 2.0 + x * x / 24.0
    return jnp.where(small, series, jnp.where(x > 0, above, below))


def cholesky(matrix):
    """Lower Cholesky factor; concrete inputs that are not PD raise."""
    factor = jnp.linalg.cholesky(matrix)
    if is_concrete(factor) and not bool(jnp.all(jnp.isfinite(factor))):
        raise DecompositionError("matrix is not positive definite")
    return factor


def mvn_logpdf_from_factor(x, mean, factor):
    """Row-wise N(x; mean, L L^T) log-density given the Cholesky factor L."""
    diff = jnp.atleast_2d(x - mean)
    white = solve_triangular(factor, diff.T, lower=True)
    k = factor.shape[-1]
    out = (
        -0.5 * jnp.sum(white**2, axis=0)
        - jnp.sum(jnp.log(jnp.diag(factor)))
        - 0.5 * k * LOG_2PI
    )
    return out if jnp.ndim(x) > 1 else out[0]


def mvn_logpdf(x, mean, cov):
    return mvn_logpdf_from_factor(x, mean, cholesky(cov))

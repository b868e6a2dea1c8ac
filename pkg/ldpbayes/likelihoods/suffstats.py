"""Normal approximation to the perturbed sum of sufficient statistics.

Every statistic coordinate is w * u_i * u_j for the augmented record
u = (x, y). Its mean is w * C_ij and, for zero-mean Gaussian u with covariance
C, Isserlis' theorem gives Cov(u_i u_j, u_k u_l) = C_ik C_jl + C_il C_jk.

The logistic label is not Gaussian; its cross moments come from the
quadratic sigmoid surrogate, under which E[y x] = 2 b1 Sigma theta and
Cov(y x) = Sigma - 4 b1^2 (Sigma theta)(Sigma theta)^T.
"""

import jax.numpy as jnp

from ldpbayes.likelihoods.numerics import mvn_logpdf
from ldpbayes.mechanisms.statistics import statistic_pairs
from ldpbayes.utils.errors import InvalidParameterError


def _isserlis(C, rows, cols, weights):
    mean = weights * C[rows, cols]
    cov = (
        C[rows[:, None], rows[None, :]] * C[cols[:, None], cols[None, :]]
        + C[rows[:, None], cols[None, :]] * C[cols[:, None], rows[None, :]]
    )
    return mean, jnp.outer(weights, weights) * cov


def _augment(Sigma, cross, label_var):
    column = cross[:, None]
    top = jnp.concatenate([Sigma, column], axis=1)
    bottom = jnp.concatenate([column.T, jnp.reshape(label_var, (1, 1))], axis=1)
    return jnp.concatenate([top, bottom], axis=0)


def ss_moments(model, params, N=1, cheb=None):
    """Mean and covariance of the statistic summed over N records."""
    d = params.d
    rows, cols, weights = statistic_pairs(d, model)
    Sigma, theta = params.Sigma, params.theta
    v = Sigma @ theta

    if model == "linear":
        C = _augment(Sigma, v, theta @ v + params.sigma**2)
        mean, cov = _isserlis(C, rows, cols, weights)
    else:
        if cheb is None:
            raise InvalidParameterError("the logistic statistic needs Chebyshev coefficients")
        slope = 2.0 * cheb.b1
        C = _augment(Sigma, slope * v, 1.0)
        mean, cov = _isserlis(C, rows, cols, weights)
        # Isserlis yields Sigma + slope^2 v v^T on the y x block
        label = jnp.where(cols == d, v[rows], 0.0)
        cov = cov - 2.0 * slope**2 * jnp.outer(label, label)

    return N * mean, N * 0.5 * (cov + cov.T)


def ss_model_loglik(summary, params, cheb=None):
    """log N(Z; mu_s, Sigma_s + N Sigma*)."""
    mean, cov = ss_moments(summary.layout, params, summary.N, cheb)
    total = cov + summary.N * jnp.diag(summary.SigmaStar)
    return mvn_logpdf(summary.Z, mean, total)

import jax.numpy as jnp
from jax.nn import log_sigmoid
from jax.scipy.special import logsumexp


def oue_loglik(z, params, epsilon):
    """Log-probability of OUE bit vector(s) z, marginalized over the category.

    p^d e^{-eps sum z} sum_k theta_k e^{eps z_k} / (2p), with p = e^eps / (1 + e^eps).
    Rows of a 2-D z are scored independently.
    """
    z = jnp.asarray(z, dtype=float)
    log_theta = jnp.log(params.theta)
    log_p = log_sigmoid(epsilon)
    d = params.theta.shape[-1]
    return (
        (d - 1) * log_p
        - jnp.log(2.0)
        - epsilon * jnp.sum(z, axis=-1)
        + logsumexp(log_theta + epsilon * z, axis=-1)
    )


def categorical_loglik(onehot, theta):
    """Non-private log-probability of one-hot category indicators."""
    return jnp.asarray(onehot, dtype=float) @ jnp.log(theta)

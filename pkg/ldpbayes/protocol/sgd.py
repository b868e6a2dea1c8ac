"""Local DP-SGD baseline.

Clients are split into sequential groups. Every client of a group receives
the current weights, returns one gradient clipped to L2 norm `clip` and
perturbed with analytic-Gaussian noise for sensitivity 2 * clip, and the
aggregator steps once on the group mean. The first group needs no
broadcast, so N clients exchange 2N - G messages.
"""

import logging

import numpy as np
from scipy.special import expit

from ldpbayes.mechanisms import clip_norm
from ldpbayes.protocol.models import SGDResult
from ldpbayes.utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)


def _gradients(weights, x, y, loss):
    """Per-example gradients of the logistic or squared loss, one row per client."""
    residual = (expit(x @ weights) if loss == "logistic" else x @ weights) - y
    return residual[:, None] * x


def ldp_sgd(records, config, rng, weights=None):
    """Sequential group-wise SGD where each client contributes exactly one noisy gradient."""
    if records.kind != "labeled":
        raise InvalidParameterError("LDP-SGD runs on labeled records")
    x = np.asarray(records.values, dtype=float)
    y = np.asarray(records.labels, dtype=float)
    N, d = x.shape
    if d != config.d:
        raise InvalidParameterError(f"records have {d} features, config expects {config.d}")

    sigma = config.noise_std
    group_size = config.group_size
    if N < group_size:
        logger.warning("N = %d is below the group size %d; running a single group", N, group_size)
        group_size = max(N, 1)

    weights = np.zeros(d) if weights is None else np.asarray(weights, dtype=float).copy()
    starts = range(0, N, group_size)
    for start in starts:
        rows = slice(start, start + group_size)
        grads = clip_norm(_gradients(weights, x[rows], y[rows], config.loss), config.clip)
        noisy = grads + rng.normal(0.0, sigma, size=grads.shape) if sigma > 0 else grads
        weights -= config.learning_rate * noisy.mean(axis=0)

    messages = 2 * N - min(group_size, N)
    return SGDResult(weights, messages, len(starts), group_size)

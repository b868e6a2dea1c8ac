"""Client-side randomizers and clipping.

Every function is pure given its generator: the same seed yields the same
output. Inputs may be scalars or arrays; scalars come back as Python scalars.
"""

import numpy as np
from scipy.special import expit

from ldpbayes.utils.errors import InvalidParameterError


def _size(x):
    return np.shape(x) or None


def laplace_perturb(x, scale, rng):
    """Return x + Laplace(0, scale) noise, sampled by inverting the CDF."""
    if not scale > 0:
        raise InvalidParameterError(f"Laplace scale must be > 0, got {scale}")
    # open interval: u = -1/2 would give log(0)
    u = rng.uniform(np.nextafter(-0.5, 0.0), 0.5, size=_size(x))
    noise = -scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))
    out = np.asarray(x, dtype=float) + noise
    return float(out) if out.ndim == 0 else out


def rr_perturb(bit, epsilon, rng):
    """Keep `bit` with probability e^eps / (1 + e^eps), otherwise flip it."""
    bits = np.asarray(bit)
    if not np.isin(bits, (0, 1)).all():
        raise InvalidParameterError("randomized response takes bits in {0, 1}")
    keep = rng.random(size=_size(bit)) < expit(epsilon)
    out = np.where(keep, bits, 1 - bits).astype(np.int8)
    return int(out) if out.ndim == 0 else out


def oue_perturb(k, d, epsilon, rng):
    """Unary-encode category `k` (0-based) and randomize every position.

    The hot position reports 1 with probability 1/2; every other position
    reports 1 with probability 1 / (1 + e^eps).
    """
    if not 0 <= k < d:
        raise InvalidParameterError(f"category {k} outside [0, {d})")
    flip = 1.0 - expit(epsilon)
    z = (rng.random(d) < flip).astype(np.int8)
    z[k] = rng.random() < 0.5
    return z


def clip_scalar(x, bounds):
    out = np.minimum(np.maximum(np.asarray(x, dtype=float), bounds.a), bounds.b)
    return float(out) if out.ndim == 0 else out


def clip_norm(x, R):
    """Rescale (rows of) x onto the L2 ball of radius R; shorter vectors pass."""
    if not R > 0:
        raise InvalidParameterError(f"clip radius must be > 0, got {R}")
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(x, axis=-1, keepdims=True)
    factor = np.where(norms > R, R / np.where(norms > 0, norms, 1.0), 1.0)
    return x * factor

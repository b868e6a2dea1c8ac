"""Parameter containers for the likelihoods.

Fields may hold JAX tracers while the sampler runs; validation only fires on
concrete values.
"""

from dataclasses import dataclass

import jax.numpy as jnp

from ldpbayes.likelihoods.numerics import is_concrete
from ldpbayes.mechanisms.models import ClipBounds
from ldpbayes.utils.errors import InvalidParameterError


def _require(condition, message, *values):
    if is_concrete(*values) and not bool(condition()):
        raise InvalidParameterError(message)


@dataclass(frozen=True)
class GaussianModelParams:
    mu: float
    sigma: float
    bounds: ClipBounds
    epsilon: float

    def __post_init__(self):
        _require(lambda: self.sigma > 0, "sigma must be > 0", self.sigma)
        _require(lambda: self.epsilon > 0, "epsilon must be > 0", self.epsilon)


@dataclass(frozen=True)
class ExponentialModelParams:
    theta: float
    b: float
    epsilon: float

    def __post_init__(self):
        _require(lambda: self.theta > 0, "rate theta must be > 0", self.theta)
        _require(lambda: self.b > 0, "upper clip b must be > 0", self.b)
        _require(lambda: self.epsilon > 0, "epsilon must be > 0", self.epsilon)


@dataclass(frozen=True)
class MultinomialParams:
    theta: jnp.ndarray

    def __post_init__(self):
        theta = jnp.asarray(self.theta)
        object.__setattr__(self, "theta", theta)
        _require(
            lambda: jnp.all(theta >= 0) & (jnp.abs(jnp.sum(theta) - 1.0) <= 1e-12),
            "theta must lie on the probability simplex",
            theta,
        )

    @property
    def d(self):
        return self.theta.shape[-1]


@dataclass(frozen=True)
class RegressionParams:
    """Weights theta, feature covariance Sigma, residual std sigma (linear only)."""

    theta: jnp.ndarray
    Sigma: jnp.ndarray
    sigma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta", jnp.asarray(self.theta))
        object.__setattr__(self, "Sigma", jnp.asarray(self.Sigma))
        if self.Sigma.shape != (self.d, self.d):
            raise InvalidParameterError("Sigma must be d x d for d = len(theta)")
        if self.sigma is not None:
            _require(lambda: self.sigma > 0, "sigma must be > 0", self.sigma)

    @property
    def d(self):
        return self.theta.shape[-1]


@dataclass(frozen=True)
class SuffStatSummary:
    """Perturbed statistic sum Z over N records; SigmaStar is the per-record noise variance."""

    Z: jnp.ndarray
    N: int
    SigmaStar: jnp.ndarray
    layout: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "Z", jnp.asarray(self.Z))
        object.__setattr__(self, "SigmaStar", jnp.asarray(self.SigmaStar))
        if self.Z.shape != self.SigmaStar.shape:
            raise InvalidParameterError("Z and SigmaStar must have the same length")
        _require(lambda: self.N >= 1, "N must be >= 1", self.N)


@dataclass(frozen=True)
class PosteriorNoiseGeometry:
    """Conditional mean h (one row per record) and covariance A of x given z_x."""

    h: jnp.ndarray
    A: jnp.ndarray

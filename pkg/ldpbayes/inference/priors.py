"""Prior specifications shared by the inference models."""

from dataclasses import dataclass
from typing import ClassVar

import jax
import jax.numpy as jnp
import numpy as np
import numpyro
import numpyro.distributions as dist

from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import InvalidParameterError


SCALE_SUFFIX = "_tau"
CORR_SUFFIX = "_corr_chol"


def prng_key(rng):
    """A JAX key drawn from a numpy generator, so one seed drives both."""
    return jax.random.PRNGKey(int(rng.integers(2**31)))


def _positive(name, value):
    if not value > 0:
        raise InvalidParameterError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class NormalPrior(BaseMixin):
    kind: ClassVar[str] = "normal"

    mu0: float = 0.0
    sigma0: float = 1.0

    def __post_init__(self):
        _positive("sigma0", self.sigma0)

    def distribution(self, shape=()):
        return dist.Normal(self.mu0, self.sigma0).expand(shape)

    def site(self, name, shape=()):
        return numpyro.sample(name, self.distribution(shape))

    def draw(self, rng, shape=()):
        return np.asarray(self.distribution(shape).sample(prng_key(rng)))

    def moments(self):
        return self.mu0, self.sigma0**2


@dataclass(frozen=True)
class GammaPrior(BaseMixin):
    """Shape alpha, rate beta."""

    kind: ClassVar[str] = "gamma"

    alpha: float = 2.0
    beta: float = 2.0

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("beta", self.beta)

    def distribution(self, shape=()):
        return dist.Gamma(self.alpha, self.beta).expand(shape)

    def site(self, name, shape=()):
        return numpyro.sample(name, self.distribution(shape))

    def draw(self, rng, shape=()):
        return np.asarray(self.distribution(shape).sample(prng_key(rng)))

    def moments(self):
        return self.alpha / self.beta, self.alpha / self.beta**2


@dataclass(frozen=True)
class DirichletPrior(BaseMixin):
    kind: ClassVar[str] = "dirichlet"

    concentration: tuple

    def __post_init__(self):
        object.__setattr__(self, "concentration", tuple(float(c) for c in self.concentration))
        if len(self.concentration) < 2:
            raise InvalidParameterError("Dirichlet needs at least two categories")
        for c in self.concentration:
            _positive("concentration", c)

    @classmethod
    def flat(cls, d):
        return cls((1.0,) * d)

    def distribution(self, shape=()):
        return dist.Dirichlet(jnp.asarray(self.concentration))

    def site(self, name, shape=()):
        return numpyro.sample(name, self.distribution())

    def draw(self, rng, shape=()):
        return np.asarray(self.distribution().sample(prng_key(rng)))

    def moments(self):
        alpha = np.asarray(self.concentration)
        total = alpha.sum()
        mean = alpha / total
        return mean, mean * (1.0 - mean) / (total + 1.0)


@dataclass(frozen=True)
class ScaledLKJPrior(BaseMixin):
    """Sigma = diag(tau) Omega diag(tau), Omega ~ LKJ(eta), tau ~ HalfNormal(tau_scale).

    The sampled sites are `<name>_corr_chol` and `<name>_tau`; the covariance
    itself is recorded as a deterministic site under `name`.
    """

    kind: ClassVar[str] = "scaled_lkj"

    d: int
    eta: float = 2.0
    tau_scale: float = 2.5

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("ScaledLKJ needs d >= 1")
        _positive("eta", self.eta)
        _positive("tau_scale", self.tau_scale)

    def site(self, name, shape=()):
        tau = numpyro.sample(f"{name}{SCALE_SUFFIX}", dist.HalfNormal(self.tau_scale).expand([self.d]))
        if self.d == 1:
            return numpyro.deterministic(name, jnp.reshape(tau**2, (1, 1)))
        corr_chol = numpyro.sample(f"{name}{CORR_SUFFIX}", dist.LKJCholesky(self.d, self.eta))
        scaled = tau[:, None] * corr_chol
        return numpyro.deterministic(name, scaled @ scaled.T)

    def draw(self, rng, shape=()):
        key_tau, key_corr = jax.random.split(prng_key(rng))
        tau = np.asarray(dist.HalfNormal(self.tau_scale).expand([self.d]).sample(key_tau))
        if self.d == 1:
            return np.reshape(tau**2, (1, 1))
        corr_chol = np.asarray(dist.LKJCholesky(self.d, self.eta).sample(key_corr))
        scaled = tau[:, None] * corr_chol
        return scaled @ scaled.T


PriorSpec = NormalPrior | GammaPrior | DirichletPrior | ScaledLKJPrior

PRIORS = {cls.kind: cls for cls in (NormalPrior, GammaPrior, DirichletPrior, ScaledLKJPrior)}


def prior_from_dict(data, source=None):
    data = dict(data)
    kind = data.get("kind")
    if kind not in PRIORS:
        raise InvalidParameterError(f"unknown prior kind {kind!r}")
    return PRIORS[kind].from_dict(data, source=source)

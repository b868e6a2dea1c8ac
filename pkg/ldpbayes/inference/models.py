"""Inference models: priors, generative process and noise-aware likelihood.

Each model is a frozen, hashable spec. `budget=None` (or an infinite epsilon,
except for the sufficient-statistic models) selects the non-private twin, which conditions on the clipped raw records
with the exact likelihood. `program(data)` is the numpyro program the
sampler runs; `data` is the pytree the aggregator builds from a
CollectionRun.
"""

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import jax.numpy as jnp
import numpy as np
import numpyro
from scipy.special import expit

from ldpbayes.approx.chebyshev import DEFAULT_INTERVAL, cheb_fit_sigmoid
from ldpbayes.inference.priors import (
    DirichletPrior,
    GammaPrior,
    NormalPrior,
    ScaledLKJPrior,
)
from ldpbayes.likelihoods import (
    ExponentialModelParams,
    GaussianModelParams,
    MultinomialParams,
    RegressionParams,
    SuffStatSummary,
    categorical_loglik,
    linreg_exact_loglik,
    linreg_input_loglik,
    logreg_exact_loglik,
    logreg_input_loglik,
    oue_loglik,
    rect_exp_exact_loglik,
    rect_exp_loglik,
    rect_gauss_exact_loglik,
    rect_gauss_loglik,
    ss_model_loglik,
    surrogate_clamp_rate,
)
from ldpbayes.mechanisms import (
    AnalyticGaussianMechanism,
    ClipBounds,
    InputPerturbation,
    LaplaceMechanism,
    NoiselessRelease,
    OUEMechanism,
    PrivacyBudget,
    RandomizedResponseMechanism,
    StatisticPerturbation,
    calibrate_statistic,
    clip_norm,
    clip_scalar,
    optimal_logreg_noise_ratio,
    sens_input_x,
    sens_input_y,
    statistic_dim,
)
from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import InvalidParameterError

THETA_PRIOR_STD = math.sqrt(5.0)


@dataclass(frozen=True)
class SamplerConfig(BaseMixin):
    chains: int = 4
    draws: int = 2000
    warmup_fraction: float = 0.5
    target_accept: float = 0.8
    max_tree_depth: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.chains < 2:
            raise InvalidParameterError("the sampler needs at least two chains")
        if not 0.0 < self.warmup_fraction < 1.0:
            raise InvalidParameterError("warmup_fraction must lie in (0, 1)")
        if not 0.0 < self.target_accept < 1.0:
            raise InvalidParameterError("target_accept must lie in (0, 1)")
        if self.max_tree_depth < 1:
            raise InvalidParameterError("max_tree_depth must be >= 1")
        if self.num_samples < 1:
            raise InvalidParameterError("draws leave no post-warmup samples")

    @property
    def num_warmup(self):
        return round(self.draws * self.warmup_fraction)

    @property
    def num_samples(self):
        return self.draws - self.num_warmup


@dataclass(frozen=True)
class UnconstrainedPoint:
    values: np.ndarray
    log_jacobian: float = 0.0


def _private(budget):
    return budget is not None and not budget.is_noiseless


def _loglik(value):
    numpyro.factor("loglik", value)


class _ModelMixin(BaseMixin):
    """Shared behaviour of the model specs."""

    @property
    def private(self):
        return _private(self.budget)

    def nonprivate(self):
        """The same model conditioning on raw records."""
        return replace(self, budget=None)

    def truth(self, params):
        """The subset of `params` the reported sites describe."""
        return {site: params[site] for site in self.sites}


# =========================================================================
# Scalar models
# =========================================================================


@dataclass(frozen=True)
class GaussianModel(_ModelMixin):
    """Clipped Gaussian observations released through the Laplace mechanism."""

    kind: ClassVar[str] = "gaussian"
    payload: ClassVar[str] = "scalar"
    sites: ClassVar[tuple] = ("mu", "sigma")

    budget: PrivacyBudget | None = None
    bounds: ClipBounds = ClipBounds(-5.0, 5.0)
    mu_prior: NormalPrior = NormalPrior(0.0, 1.0)
    sigma_prior: GammaPrior = GammaPrior(2.0, 2.0)

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        return LaplaceMechanism.for_bounds(self.bounds, self.budget.epsilon)

    def draw_parameters(self, rng):
        return {"mu": float(self.mu_prior.draw(rng)), "sigma": float(self.sigma_prior.draw(rng))}

    def simulate(self, params, N, rng):
        return rng.normal(params["mu"], params["sigma"], size=N)

    def clip(self, values):
        return clip_scalar(values, self.bounds)

    def program(self, data):
        mu = self.mu_prior.site("mu")
        sigma = self.sigma_prior.site("sigma")
        if self.private:
            params = GaussianModelParams(mu, sigma, self.bounds, self.budget.epsilon)
            _loglik(jnp.sum(rect_gauss_loglik(data["z"], params)))
        else:
            _loglik(jnp.sum(rect_gauss_exact_loglik(data["z"], mu, sigma, self.bounds)))


@dataclass(frozen=True)
class ExponentialModel(_ModelMixin):
    """Exp(theta) observations clipped to [0, b], released through the Laplace mechanism."""

    kind: ClassVar[str] = "exponential"
    payload: ClassVar[str] = "scalar"
    sites: ClassVar[tuple] = ("theta",)

    budget: PrivacyBudget | None = None
    b: float = 5.0
    theta_prior: GammaPrior = GammaPrior(2.0, 2.0)

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidParameterError("upper clip b must be > 0")

    @property
    def bounds(self):
        return ClipBounds(0.0, self.b)

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        return LaplaceMechanism.for_bounds(self.bounds, self.budget.epsilon)

    def draw_parameters(self, rng):
        return {"theta": float(self.theta_prior.draw(rng))}

    def simulate(self, params, N, rng):
        return rng.exponential(1.0 / params["theta"], size=N)

    def clip(self, values):
        return clip_scalar(values, self.bounds)

    def program(self, data):
        theta = self.theta_prior.site("theta")
        if self.private:
            params = ExponentialModelParams(theta, self.b, self.budget.epsilon)
            _loglik(jnp.sum(rect_exp_loglik(data["z"], params)))
        else:
            _loglik(jnp.sum(rect_exp_exact_loglik(data["z"], theta, self.b)))


@dataclass(frozen=True)
class MultinomialModel(_ModelMixin):
    """Categorical records released through optimal unary encoding."""

    kind: ClassVar[str] = "multinomial"
    payload: ClassVar[str] = "category"
    sites: ClassVar[tuple] = ("theta",)

    d: int = 3
    budget: PrivacyBudget | None = None
    prior: DirichletPrior | None = None

    def __post_init__(self):
        if self.d < 2:
            raise InvalidParameterError("the multinomial model needs d >= 2")
        if self.prior is None:
            object.__setattr__(self, "prior", DirichletPrior.flat(self.d))
        if len(self.prior.concentration) != self.d:
            raise InvalidParameterError("Dirichlet concentration must have length d")

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        return OUEMechanism.from_epsilon(self.budget.epsilon, self.d)

    def draw_parameters(self, rng):
        return {"theta": self.prior.draw(rng)}

    def simulate(self, params, N, rng):
        return rng.choice(self.d, size=N, p=np.asarray(params["theta"], dtype=float))

    def clip(self, values):
        return values

    def program(self, data):
        theta = self.prior.site("theta")
        params = MultinomialParams(theta)
        if self.private:
            # reports are deduplicated: one row per distinct bit vector
            log_terms = oue_loglik(data["patterns"], params, self.budget.epsilon)
            _loglik(jnp.sum(data["weights"] * log_terms))
        else:
            _loglik(categorical_loglik(data["counts"], theta))


# =========================================================================
# Regression models
# =========================================================================


@dataclass(frozen=True)
class _RegressionModel(_ModelMixin):
    payload: ClassVar[str] = "labeled"

    d: int = 2
    budget: PrivacyBudget | None = None
    R: float = 1.0
    Ry: float = 1.0
    theta_prior: NormalPrior = NormalPrior(0.0, THETA_PRIOR_STD)
    Sigma_prior: ScaledLKJPrior | None = None

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("regression needs d >= 1")
        if not (self.R > 0 and self.Ry > 0):
            raise InvalidParameterError("R and Ry must be > 0")
        if self.Sigma_prior is None:
            object.__setattr__(self, "Sigma_prior", ScaledLKJPrior(self.d))

    def draw_parameters(self, rng):
        params = {
            "theta": self.theta_prior.draw(rng, (self.d,)),
            "Sigma": self.Sigma_prior.draw(rng),
        }
        if self.task == "linear":
            params["sigma"] = float(self.sigma_prior.draw(rng))
        return params

    def simulate(self, params, N, rng):
        Sigma = np.asarray(params["Sigma"], dtype=float)
        theta = np.asarray(params["theta"], dtype=float)
        x = rng.multivariate_normal(np.zeros(self.d), Sigma, size=N, method="cholesky")
        logits = x @ theta
        if self.task == "linear":
            y = logits + rng.normal(0.0, params["sigma"], size=N)
        else:
            y = (rng.random(N) < expit(logits)).astype(float)
        return x, y

    def clip(self, values):
        x, y = values
        x = clip_norm(x, self.R)
        if self.task == "linear":
            y = clip_scalar(y, ClipBounds(-self.Ry, self.Ry))
        return x, y

    def _regression_sites(self):
        theta = self.theta_prior.site("theta", (self.d,))
        Sigma = self.Sigma_prior.site("Sigma")
        sigma = self.sigma_prior.site("sigma") if self.task == "linear" else None
        return RegressionParams(theta, Sigma, sigma)

    def _exact(self, data, params):
        if self.task == "linear":
            return jnp.sum(linreg_exact_loglik(data["x"], data["y"], params))
        return jnp.sum(logreg_exact_loglik(data["x"], data["y"], params))


class _StatisticMixin:
    """An infinite epsilon still goes through the summary, with zero noise."""

    @property
    def private(self):
        return self.budget is not None

    def _release(self, ratios):
        if self.budget.is_noiseless:
            return StatisticPerturbation(self.task, self.d, (0.0,) * statistic_dim(self.d, self.task))
        return calibrate_statistic(self.task, self.d, self.budget, self.R, self.Ry, ratios)


@dataclass(frozen=True)
class LinearSSModel(_StatisticMixin, _RegressionModel):
    """Linear regression from the perturbed sum of per-record sufficient statistics."""

    kind: ClassVar[str] = "linear_ss"
    task: ClassVar[str] = "linear"
    sites: ClassVar[tuple] = ("theta", "sigma", "Sigma")

    sigma_prior: GammaPrior = GammaPrior(2.0, 2.0)
    ratios: tuple = (1.0, 1.0)

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        return self._release(self.ratios)

    def program(self, data):
        params = self._regression_sites()
        if not self.private:
            _loglik(self._exact(data, params))
            return
        summary = SuffStatSummary(data["Z"], data["N"], data["SigmaStar"], "linear")
        _loglik(ss_model_loglik(summary, params))


@dataclass(frozen=True)
class LogisticSSModel(_StatisticMixin, _RegressionModel):
    """Logistic regression from perturbed statistics under the quadratic sigmoid surrogate."""

    kind: ClassVar[str] = "logistic_ss"
    task: ClassVar[str] = "logistic"
    sites: ClassVar[tuple] = ("theta", "Sigma")

    ratio: float | None = None
    interval: tuple = DEFAULT_INTERVAL

    @property
    def cheb(self):
        return cheb_fit_sigmoid(self.interval)

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        return self._release((self.ratio or optimal_logreg_noise_ratio(self.R),))

    def program(self, data):
        params = self._regression_sites()
        if not self.private:
            _loglik(self._exact(data, params))
            return
        summary = SuffStatSummary(data["Z"], data["N"], data["SigmaStar"], "logistic")
        _loglik(ss_model_loglik(summary, params, self.cheb))


@dataclass(frozen=True)
class LinearInputModel(_RegressionModel):
    """Linear regression from individually perturbed features and labels."""

    kind: ClassVar[str] = "linear_input"
    task: ClassVar[str] = "linear"
    sites: ClassVar[tuple] = ("theta", "sigma", "Sigma")

    sigma_prior: GammaPrior = GammaPrior(2.0, 2.0)
    label_fraction: float = 0.5

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        label_budget, feature_budget = self.budget.split(self.label_fraction)
        return InputPerturbation(
            AnalyticGaussianMechanism.calibrate(sens_input_x(self.R), feature_budget),
            AnalyticGaussianMechanism.calibrate(sens_input_y(self.Ry), label_budget),
        )

    def program(self, data):
        params = self._regression_sites()
        if not self.private:
            _loglik(self._exact(data, params))
            return
        SigmaStar = data["noise_x"] ** 2 * jnp.eye(self.d)
        _loglik(jnp.sum(linreg_input_loglik(data["zx"], data["zy"], params, SigmaStar, data["noise_y"])))


@dataclass(frozen=True)
class LogisticInputModel(_RegressionModel):
    """Logistic regression from Gaussian-perturbed features and randomized-response labels."""

    kind: ClassVar[str] = "logistic_input"
    task: ClassVar[str] = "logistic"
    sites: ClassVar[tuple] = ("theta", "Sigma")

    label_fraction: float = 0.5
    interval: tuple = DEFAULT_INTERVAL

    @property
    def cheb(self):
        return cheb_fit_sigmoid(self.interval)

    def budgets(self):
        """Label RR takes c * epsilon as pure DP; features take the rest with all of delta."""
        c = self.label_fraction
        if not 0.0 < c < 1.0:
            raise InvalidParameterError("label_fraction must lie in (0, 1)")
        eps, delta = self.budget.epsilon, self.budget.delta
        return PrivacyBudget(c * eps), PrivacyBudget((1.0 - c) * eps, delta)

    def mechanism(self):
        if not self.private:
            return NoiselessRelease()
        label_budget, feature_budget = self.budgets()
        return InputPerturbation(
            AnalyticGaussianMechanism.calibrate(sens_input_x(self.R), feature_budget),
            RandomizedResponseMechanism.from_epsilon(label_budget.epsilon),
        )

    def program(self, data):
        params = self._regression_sites()
        if not self.private:
            _loglik(self._exact(data, params))
            return
        SigmaStar = data["noise_x"] ** 2 * jnp.eye(self.d)
        loglik = logreg_input_loglik(data["zx"], data["zy"], params, SigmaStar, data["p"], self.cheb)
        _loglik(jnp.sum(loglik))

    def clamp_rate(self, data, chains):
        """Share of records whose surrogate label probability is clamped, at the posterior mean."""
        if not self.private:
            return 0.0
        rows, cols = np.triu_indices(self.d)
        Sigma = np.zeros((self.d, self.d))
        Sigma[rows, cols] = chains.means("Sigma")
        Sigma[cols, rows] = Sigma[rows, cols]
        params = RegressionParams(chains.means("theta"), Sigma)
        SigmaStar = data["noise_x"] ** 2 * jnp.eye(self.d)
        return surrogate_clamp_rate(data["zx"], params, SigmaStar, self.cheb)


ModelSpec = (
    GaussianModel
    | ExponentialModel
    | MultinomialModel
    | LinearSSModel
    | LogisticSSModel
    | LinearInputModel
    | LogisticInputModel
)

MODELS = {
    cls.kind: cls
    for cls in (
        GaussianModel,
        ExponentialModel,
        MultinomialModel,
        LinearSSModel,
        LogisticSSModel,
        LinearInputModel,
        LogisticInputModel,
    )
}


def model_from_dict(data, source=None):
    """Build a model from its `to_dict` form; nested priors and bounds are rebuilt."""
    from ldpbayes.inference.priors import prior_from_dict

    data = dict(data)
    kind = data.get("kind")
    if kind not in MODELS:
        raise InvalidParameterError(f"unknown model {kind!r}; choose from {', '.join(MODELS)}")
    for key, value in list(data.items()):
        if isinstance(value, dict) and "kind" in value:
            data[key] = prior_from_dict(value, source)
        elif key == "bounds" and isinstance(value, dict):
            data[key] = ClipBounds(**value)
        elif key == "bounds" and isinstance(value, list | tuple):
            data[key] = ClipBounds(*value)
        elif key == "budget" and isinstance(value, dict):
            data[key] = PrivacyBudget(**value)
        elif key in ("interval", "ratios") and isinstance(value, list):
            data[key] = tuple(value)
    return MODELS[kind].from_dict(data, source=source)


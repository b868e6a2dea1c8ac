from ldpbayes.inference.chains import ChainSet, flatten_sites, site_names
from ldpbayes.inference.diagnostics import RhatReport, credible_interval, rhat, split_rhat
from ldpbayes.inference.models import (
    MODELS,
    ExponentialModel,
    GaussianModel,
    LinearInputModel,
    LinearSSModel,
    LogisticInputModel,
    LogisticSSModel,
    ModelSpec,
    MultinomialModel,
    SamplerConfig,
    UnconstrainedPoint,
    model_from_dict,
)
from ldpbayes.inference.posterior import PosteriorDensity, log_posterior
from ldpbayes.inference.priors import (
    DirichletPrior,
    GammaPrior,
    NormalPrior,
    PriorSpec,
    ScaledLKJPrior,
    prior_from_dict,
)
from ldpbayes.inference.sampler import PosteriorSampler, sample
from ldpbayes.inference.transforms import (
    inverse_covariance,
    inverse_positive,
    inverse_simplex,
    transform_corr_cholesky,
    transform_covariance,
    transform_positive,
    transform_simplex,
    transform_site,
    upper_triangle,
)

__all__ = [
    "MODELS",
    "ChainSet",
    "DirichletPrior",
    "ExponentialModel",
    "GammaPrior",
    "GaussianModel",
    "LinearInputModel",
    "LinearSSModel",
    "LogisticInputModel",
    "LogisticSSModel",
    "ModelSpec",
    "MultinomialModel",
    "NormalPrior",
    "PosteriorDensity",
    "PosteriorSampler",
    "PriorSpec",
    "RhatReport",
    "SamplerConfig",
    "ScaledLKJPrior",
    "UnconstrainedPoint",
    "credible_interval",
    "flatten_sites",
    "inverse_covariance",
    "inverse_positive",
    "inverse_simplex",
    "log_posterior",
    "model_from_dict",
    "prior_from_dict",
    "rhat",
    "sample",
    "site_names",
    "split_rhat",
    "transform_corr_cholesky",
    "transform_covariance",
    "transform_positive",
    "transform_simplex",
    "transform_site",
    "upper_triangle",
]

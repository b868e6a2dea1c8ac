from ldpbayes.likelihoods.marginal import poly_gauss_marginal, truncated_normal_moments
from ldpbayes.likelihoods.models import (
    ExponentialModelParams,
    GaussianModelParams,
    MultinomialParams,
    PosteriorNoiseGeometry,
    RegressionParams,
    SuffStatSummary,
)
from ldpbayes.likelihoods.oue import categorical_loglik, oue_loglik
from ldpbayes.likelihoods.rectified import (
    rect_exp_exact_loglik,
    rect_exp_loglik,
    rect_gauss_exact_loglik,
    rect_gauss_loglik,
)
from ldpbayes.likelihoods.regression import (
    linreg_exact_loglik,
    linreg_input_loglik,
    logreg_exact_loglik,
    logreg_input_loglik,
    noise_geometry,
    surrogate_clamp_rate,
)
from ldpbayes.likelihoods.suffstats import ss_model_loglik, ss_moments

__all__ = [
    "ExponentialModelParams",
    "GaussianModelParams",
    "MultinomialParams",
    "PosteriorNoiseGeometry",
    "RegressionParams",
    "SuffStatSummary",
    "categorical_loglik",
    "linreg_exact_loglik",
    "linreg_input_loglik",
    "logreg_exact_loglik",
    "logreg_input_loglik",
    "noise_geometry",
    "oue_loglik",
    "poly_gauss_marginal",
    "rect_exp_exact_loglik",
    "rect_exp_loglik",
    "rect_gauss_exact_loglik",
    "rect_gauss_loglik",
    "ss_model_loglik",
    "ss_moments",
    "surrogate_clamp_rate",
    "truncated_normal_moments",
]

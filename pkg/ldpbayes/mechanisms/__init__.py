from ldpbayes.mechanisms.calibration import calibrate_gaussian, gaussian_privacy_profile
from ldpbayes.mechanisms.models import (
    AnalyticGaussianMechanism,
    ClipBounds,
    InputPerturbation,
    LaplaceMechanism,
    MechanismSpec,
    NoiselessRelease,
    OUEMechanism,
    PrivacyBudget,
    RandomizedResponseMechanism,
    SensitivityInputs,
    StatisticPerturbation,
    mechanism_from_dict,
)
from ldpbayes.mechanisms.perturb import (
    clip_norm,
    clip_scalar,
    laplace_perturb,
    oue_perturb,
    rr_perturb,
)
from ldpbayes.mechanisms.sensitivity import (
    calibrate_statistic,
    optimal_logreg_noise_ratio,
    sens_input_x,
    sens_input_y,
    sens_linreg,
    sens_logreg_ss,
)
from ldpbayes.mechanisms.statistics import (
    statistic_blocks,
    statistic_dim,
    statistic_pairs,
    sufficient_statistic,
)

__all__ = [
    "AnalyticGaussianMechanism",
    "ClipBounds",
    "InputPerturbation",
    "LaplaceMechanism",
    "MechanismSpec",
    "NoiselessRelease",
    "OUEMechanism",
    "PrivacyBudget",
    "RandomizedResponseMechanism",
    "SensitivityInputs",
    "StatisticPerturbation",
    "calibrate_gaussian",
    "calibrate_statistic",
    "clip_norm",
    "clip_scalar",
    "gaussian_privacy_profile",
    "laplace_perturb",
    "mechanism_from_dict",
    "optimal_logreg_noise_ratio",
    "oue_perturb",
    "rr_perturb",
    "sens_input_x",
    "sens_input_y",
    "sens_linreg",
    "sens_logreg_ss",
    "statistic_blocks",
    "statistic_dim",
    "statistic_pairs",
    "sufficient_statistic",
]

from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import (
    ConfigError,
    DecompositionError,
    ExperimentFailureError,
    InvalidParameterError,
    LdpBayesError,
    NumericFailureError,
    SamplingFailureError,
    UnsupportedBudgetError,
)

__all__ = [
    "BaseMixin",
    "ConfigError",
    "DecompositionError",
    "ExperimentFailureError",
    "InvalidParameterError",
    "LdpBayesError",
    "NumericFailureError",
    "SamplingFailureError",
    "UnsupportedBudgetError",
]

from ldpbayes.approx.chebyshev import (
    DEFAULT_INTERVAL,
    ChebCoeffs,
    cheb_fit_sigmoid,
    chebyshev_fit,
    sigmoid_expectation,
    surrogate_expectation,
    surrogate_quality,
)

__all__ = [
    "DEFAULT_INTERVAL",
    "ChebCoeffs",
    "cheb_fit_sigmoid",
    "chebyshev_fit",
    "sigmoid_expectation",
    "surrogate_expectation",
    "surrogate_quality",
]

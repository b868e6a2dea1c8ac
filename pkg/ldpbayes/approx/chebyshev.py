"""Quadratic Chebyshev surrogate of the sigmoid and its Gaussian expectation."""

from dataclasses import dataclass

import jax.numpy as jnp
import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial.chebyshev import chebpts1
from numpy.polynomial.hermite_e import hermegauss
from scipy.special import expit

from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import InvalidParameterError

DEFAULT_INTERVAL = (-4.0, 4.0)
PROJECTION_NODES = 128


@dataclass(frozen=True)
class ChebCoeffs(BaseMixin):
    """Monomial coefficients b0 + b1 t + b2 t^2 fitted on `interval`."""

    b0: float
    b1: float
    b2: float
    interval: tuple = DEFAULT_INTERVAL

    def __post_init__(self):
        object.__setattr__(self, "interval", tuple(float(v) for v in self.interval))
        lo, hi = self.interval
        if not lo < hi:
            raise InvalidParameterError(f"degenerate interval {self.interval}")
        if not np.isfinite([self.b0, self.b1, self.b2]).all():
            raise InvalidParameterError("Chebyshev coefficients must be finite")

    def __call__(self, t):
        return self.b0 + self.b1 * t + self.b2 * t * t

    def max_error(self, points=10_001):
        """Largest |surrogate - sigmoid| on a uniform grid over the interval."""
        grid = np.linspace(*self.interval, points)
        return float(np.max(np.abs(self(grid) - expit(grid))))


def chebyshev_fit(func, interval, degree, nodes=PROJECTION_NODES):
    """Project `func` onto Chebyshev polynomials of `degree` and return monomial coefficients.

    The projection is the least-squares fit at the first-kind Chebyshev points
    mapped onto the interval, which equals the discrete orthogonal projection.
    """
    lo, hi = (float(v) for v in interval)
    if not lo < hi:
        raise InvalidParameterError(f"degenerate interval ({lo}, {hi})")
    t = 0.5 * (hi - lo) * chebpts1(nodes) + 0.5 * (hi + lo)
    series = Chebyshev.fit(t, func(t), degree, domain=[lo, hi])
    coef = series.convert(kind=Polynomial).coef
    return np.pad(coef, (0, degree + 1 - len(coef)))


def cheb_fit_sigmoid(interval=DEFAULT_INTERVAL, degree=2):
    if degree != 2:
        raise InvalidParameterError("only the degree-2 surrogate is supported")
    b0, b1, b2 = chebyshev_fit(expit, interval, degree)
    lo, hi = interval
    if lo == -hi:
        # sigmoid - 1/2 is odd on a symmetric interval
        b0, b2 = 0.5, 0.0
    return ChebCoeffs(float(b0), float(b1), float(b2), (lo, hi))


def surrogate_expectation(h, A, theta, cheb):
    """E[surrogate(x^T theta)] for x ~ N(h, A); h may hold one row per record."""
    mean = jnp.asarray(h) @ theta
    var = theta @ jnp.asarray(A) @ theta
    return cheb.b0 + cheb.b1 * mean + cheb.b2 * (var + mean**2)


def sigmoid_expectation(mean, var, points=64):
    """E[sigmoid(t)] for t ~ N(mean, var) by Gauss-Hermite quadrature."""
    nodes, weights = hermegauss(points)
    mean = np.asarray(mean, dtype=float)[..., None]
    std = np.sqrt(np.maximum(np.asarray(var, dtype=float), 0.0))[..., None]
    return np.sum(weights * expit(mean + std * nodes), axis=-1) / np.sqrt(2.0 * np.pi)


def surrogate_quality(cheb, rng, d=2, repeats=50):
    """Mean |surrogate - exact| sigmoid expectation over random regression geometries.

    Each repeat draws theta ~ N(0, I), a random PD covariance, a feature
    point on the unit ball and computes the noise geometry under unit noise.
    """
    deviations = []
    for _ in range(repeats):
        theta = rng.normal(size=d)
        root = rng.normal(size=(d, d)) / np.sqrt(d)
        Sigma = root @ root.T + 0.1 * np.eye(d)
        zx = rng.normal(size=d)
        zx /= max(1.0, np.linalg.norm(zx))
        gain = Sigma @ np.linalg.inv(Sigma + np.eye(d))
        h = gain @ zx
        A = Sigma - gain @ Sigma
        approx = float(surrogate_expectation(h, A, theta, cheb))
        exact = float(sigmoid_expectation(h @ theta, theta @ A @ theta))
        deviations.append(abs(approx - exact))
    return float(np.mean(deviations))

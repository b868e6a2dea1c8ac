"""Privacy budgets, clip bounds and the mechanism specs clients run."""

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.special import expit

from ldpbayes.mechanisms.calibration import calibrate_gaussian
from ldpbayes.mechanisms.perturb import laplace_perturb, oue_perturb, rr_perturb
from ldpbayes.mechanisms.statistics import statistic_dim, sufficient_statistic
from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import InvalidParameterError


@dataclass(frozen=True)
class PrivacyBudget(BaseMixin):
    """An (epsilon, delta) pair; epsilon may be infinite for noiseless runs."""

    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "delta", float(self.delta))
        if math.isnan(self.epsilon) or self.epsilon < 0:
            raise InvalidParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        if not 0.0 <= self.delta <= 1.0:
            raise InvalidParameterError(f"delta must lie in [0, 1], got {self.delta}")

    @property
    def is_pure(self):
        return self.delta == 0.0

    @property
    def is_noiseless(self):
        return math.isinf(self.epsilon)

    def split(self, fraction):
        """Split into (fraction * eps, (1 - fraction) * eps), halving delta."""
        if not 0.0 < fraction < 1.0:
            raise InvalidParameterError(f"split fraction must lie in (0, 1), got {fraction}")
        half = self.delta / 2.0
        return (
            PrivacyBudget(fraction * self.epsilon, half),
            PrivacyBudget((1.0 - fraction) * self.epsilon, half),
        )


@dataclass(frozen=True)
class ClipBounds(BaseMixin):
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not self.a < self.b:
            raise InvalidParameterError(f"clip bounds need a < b, got [{self.a}, {self.b}]")

    @property
    def width(self):
        return self.b - self.a


@dataclass(frozen=True)
class SensitivityInputs(BaseMixin):
    """Norm bounds and per-block noise stds for the sufficient-statistic release."""

    R: float
    Ry: float
    sigma1: float = 1.0
    sigma2: float = 1.0
    sigma3: float = 1.0

    def __post_init__(self):
        for name in ("R", "Ry", "sigma1", "sigma2", "sigma3"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be > 0")


# =========================================================================
# Mechanisms
# =========================================================================


@dataclass(frozen=True)
class LaplaceMechanism(BaseMixin):
    kind: ClassVar[str] = "laplace"

    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidParameterError(f"Laplace scale must be > 0, got {self.scale}")

    @classmethod
    def calibrate(cls, sensitivity, budget):
        """scale = sensitivity / epsilon (pure DP)."""
        if not budget.epsilon > 0 or budget.is_noiseless:
            raise InvalidParameterError("Laplace calibration needs 0 < epsilon < inf")
        return cls(sensitivity / budget.epsilon)

    @classmethod
    def for_bounds(cls, bounds, epsilon):
        """Release of a scalar clipped to `bounds`: sensitivity is b - a."""
        return cls.calibrate(bounds.width, PrivacyBudget(epsilon))

    def perturb(self, value, rng):
        return laplace_perturb(value, self.scale, rng)


@dataclass(frozen=True)
class AnalyticGaussianMechanism(BaseMixin):
    kind: ClassVar[str] = "gaussian"

    sigma: float
    sensitivity: float

    def __post_init__(self):
        if not self.sigma > 0 or not self.sensitivity > 0:
            raise InvalidParameterError("Gaussian sigma and sensitivity must be > 0")

    @classmethod
    def calibrate(cls, sensitivity, budget):
        return cls(calibrate_gaussian(sensitivity, budget), sensitivity)

    def perturb(self, value, rng):
        value = np.asarray(value, dtype=float)
        noisy = value + rng.normal(0.0, self.sigma, size=value.shape)
        return float(noisy) if noisy.ndim == 0 else noisy


@dataclass(frozen=True)
class RandomizedResponseMechanism(BaseMixin):
    kind: ClassVar[str] = "rr"

    p: float

    def __post_init__(self):
        if not 0.5 <= self.p <= 1.0:
            raise InvalidParameterError(f"RR keep probability must lie in [1/2, 1], got {self.p}")

    @classmethod
    def from_epsilon(cls, epsilon):
        return cls(float(expit(epsilon)))

    @property
    def epsilon(self):
        return math.inf if self.p == 1.0 else math.log(self.p / (1.0 - self.p))

    def perturb(self, value, rng):
        return rr_perturb(value, self.epsilon, rng)


@dataclass(frozen=True)
class OUEMechanism(BaseMixin):
    """Optimal unary encoding; the hot bit stays 1 with probability q = 1/2."""

    kind: ClassVar[str] = "oue"

    p: float
    d: int
    q: float = 0.5

    def __post_init__(self):
        if self.q != 0.5:
            raise InvalidParameterError("OUE fixes q = 1/2")
        if not 0.5 <= self.p <= 1.0 or self.d < 1:
            raise InvalidParameterError("OUE needs p in [1/2, 1] and d >= 1")

    @classmethod
    def from_epsilon(cls, epsilon, d):
        return cls(float(expit(epsilon)), int(d))

    @property
    def epsilon(self):
        return math.inf if self.p == 1.0 else math.log(self.p / (1.0 - self.p))

    def perturb(self, value, rng):
        return oue_perturb(value, self.d, self.epsilon, rng)


@dataclass(frozen=True)
class InputPerturbation(BaseMixin):
    """Independent releases of a feature vector and its label."""

    kind: ClassVar[str] = "input"

    features: AnalyticGaussianMechanism
    label: AnalyticGaussianMechanism | RandomizedResponseMechanism

    def perturb(self, value, rng):
        x, y = value
        return self.features.perturb(x, rng), self.label.perturb(y, rng)

    def to_dict(self):
        return {"kind": self.kind, "features": self.features.to_dict(), "label": self.label.to_dict()}


@dataclass(frozen=True)
class StatisticPerturbation(BaseMixin):
    """Gaussian noise on the client's sufficient-statistic vector."""

    kind: ClassVar[str] = "statistic"

    layout: str
    d: int
    noise_std: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "noise_std", tuple(float(s) for s in self.noise_std))
        if len(self.noise_std) != statistic_dim(self.d, self.layout):
            raise InvalidParameterError("noise_std must have one entry per statistic coordinate")
        if any(s < 0 for s in self.noise_std):
            raise InvalidParameterError("statistic noise must be >= 0")

    def perturb(self, value, rng):
        x, y = value
        stat = sufficient_statistic(np.asarray(x, dtype=float), float(y), self.layout)
        return stat + rng.normal(0.0, 1.0, size=stat.shape) * np.asarray(self.noise_std)


@dataclass(frozen=True)
class NoiselessRelease(BaseMixin):
    """Identity release used by non-private twins and oracle controls."""

    kind: ClassVar[str] = "noiseless"

    def perturb(self, value, rng):
        return value


MechanismSpec = (
    LaplaceMechanism
    | AnalyticGaussianMechanism
    | RandomizedResponseMechanism
    | OUEMechanism
    | InputPerturbation
    | StatisticPerturbation
    | NoiselessRelease
)

MECHANISMS = {
    cls.kind: cls
    for cls in (
        LaplaceMechanism,
        AnalyticGaussianMechanism,
        RandomizedResponseMechanism,
        OUEMechanism,
        InputPerturbation,
        StatisticPerturbation,
        NoiselessRelease,
    )
}


def mechanism_from_dict(data):
    """Inverse of `to_dict` for every mechanism, used by the CSV reader."""
    data = dict(data)
    kind = data.pop("kind", None)
    if kind not in MECHANISMS:
        raise InvalidParameterError(f"unknown mechanism kind {kind!r}")
    if kind == "input":
        return InputPerturbation(
            mechanism_from_dict(data["features"]), mechanism_from_dict(data["label"])
        )
    return MECHANISMS[kind](**data)

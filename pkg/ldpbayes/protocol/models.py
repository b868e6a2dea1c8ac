"""Client-side records and the aggregator-side collection they produce."""

import math
from dataclasses import dataclass, field

import numpy as np

from ldpbayes.mechanisms import PrivacyBudget, calibrate_gaussian
from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import InvalidParameterError

PAYLOADS = ("scalar", "bit", "category", "labeled")


@dataclass(frozen=True)
class ClientRecords:
    """True client payloads, held on the simulation side only.

    scalar: values (N,); bit: values (N,) in {0, 1}; category: values (N,)
    0-based; labeled: values (N, d) with labels (N,).
    """

    kind: str
    values: np.ndarray
    labels: np.ndarray | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind not in PAYLOADS:
            raise InvalidParameterError(f"unknown payload kind {self.kind!r}")
        object.__setattr__(self, "values", np.asarray(self.values))
        if self.kind == "labeled":
            if self.labels is None or len(self.labels) != len(self.values):
                raise InvalidParameterError("labeled records need one label per feature row")
            object.__setattr__(self, "labels", np.asarray(self.labels, dtype=float))
        if self.kind == "category" and self.d is None:
            raise InvalidParameterError("category records need the number of categories d")

    def __len__(self):
        return len(self.values)

    def payload(self, i):
        if self.kind == "labeled":
            return self.values[i], self.labels[i]
        return self.values[i].item()


@dataclass
class CollectionRun:
    """Everything the aggregator receives: the shared mechanism, budget and reports.

    `reports` holds one row per client; `labels` holds the separately
    released labels of input-perturbation runs. `seeds` is the per-client
    generator lineage.
    """

    mechanism: object
    budget: PrivacyBudget | None
    reports: np.ndarray
    labels: np.ndarray | None = None
    seeds: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    invocations: int = 0

    @property
    def n(self):
        return len(self.reports)


@dataclass(frozen=True)
class SGDConfig(BaseMixin):
    """Local DP-SGD baseline: each client sends one clipped noisy gradient."""

    epsilon: float
    delta: float
    d: int
    group_constant: float = 1.0
    learning_rate: float = 0.1
    clip: float = 1.0
    loss: str = "logistic"

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("d must be >= 1")
        if not self.group_constant > 0:
            raise InvalidParameterError("group_constant must be > 0")
        if not self.clip > 0:
            raise InvalidParameterError("clip must be > 0")
        if self.loss not in ("logistic", "squared"):
            raise InvalidParameterError(f"unknown loss {self.loss!r}")
        if not PrivacyBudget(self.epsilon, self.delta).epsilon > 0:
            raise InvalidParameterError("LDP-SGD needs epsilon > 0")

    @property
    def budget(self):
        return PrivacyBudget(self.epsilon, self.delta)

    @property
    def sensitivity(self):
        """L2 distance between two gradients clipped to norm `clip`."""
        return 2.0 * self.clip

    @property
    def noise_std(self):
        if self.budget.is_noiseless:
            return 0.0
        return calibrate_gaussian(self.sensitivity, self.budget)

    @property
    def group_size(self):
        """G = ceil(c_G d ln(max(d, 2)) / eps^2), at least 1."""
        raw = self.group_constant * self.d * math.log(max(self.d, 2)) / self.epsilon**2
        return max(1, math.ceil(raw))


@dataclass(frozen=True)
class SGDResult:
    weights: np.ndarray
    messages: int
    groups: int
    group_size: int

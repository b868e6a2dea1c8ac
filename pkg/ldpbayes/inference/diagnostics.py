"""Split-R-hat and central credible intervals over a ChainSet."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ldpbayes.utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

MIN_DRAWS = 10


def split_rhat(draws):
    """Split-R-hat of one scalar, draws shaped (chains, n).

    Returns (rhat, degenerate). Each chain is cut in half (dropping the middle
    draw when n is odd) and the halves are treated as separate chains.
    Zero within-chain variance yields 1.0 and the degenerate flag.
    """
    draws = np.asarray(draws, dtype=float)
    chains, n = draws.shape
    half = n // 2
    pieces = np.concatenate([draws[:, :half], draws[:, n - half :]], axis=0)

    within = np.mean(np.var(pieces, axis=1, ddof=1))
    if within <= 0.0 or not np.isfinite(within):
        return 1.0, True
    between = half * np.var(np.mean(pieces, axis=1), ddof=1)
    pooled = (half - 1) / half * within + between / half
    return float(np.sqrt(pooled / within)), False


@dataclass
class RhatReport:
    """Per-parameter split-R-hat plus the parameters whose chains were constant."""

    values: dict
    degenerate: list = field(default_factory=list)

    def __getitem__(self, name):
        return self.values[name]

    @property
    def max(self):
        return max(self.values.values())


def rhat(chainset):
    if chainset.chains < 2:
        raise InvalidParameterError("R-hat needs at least two chains")
    if chainset.draws < MIN_DRAWS:
        raise InvalidParameterError(f"R-hat needs at least {MIN_DRAWS} draws per chain")

    report = RhatReport({})
    for name in chainset.names:
        value, degenerate = split_rhat(chainset.param(name))
        report.values[name] = value
        if degenerate:
            report.degenerate.append(name)
    if report.degenerate:
        logger.warning("Constant chains for %s; R-hat set to 1.0", ", ".join(report.degenerate))
    return report


def credible_interval(chainset, param, mass):
    """Central interval holding `mass` of the pooled draws; mass = 0 gives the median twice."""
    if not 0.0 <= mass < 1.0:
        raise InvalidParameterError(f"interval mass must lie in [0, 1), got {mass}")
    samples = chainset.param(param).ravel()
    lo, hi = np.quantile(samples, [(1.0 - mass) / 2.0, (1.0 + mass) / 2.0])
    return float(lo), float(hi)

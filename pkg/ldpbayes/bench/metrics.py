import numpy as np
from scipy.special import expit
from scipy.stats import rankdata

from ldpbayes.utils.errors import InvalidParameterError

ECDF_GRID_POINTS = 512
TIE_TOLERANCE = 1e-9


def rmse(estimate, truth):
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    return float(np.sqrt(np.mean((estimate - truth) ** 2)))


def predictive_mean(x, draws, task):
    """Posterior predictive mean per row of x, averaged over the rows of `draws`.

    Logistic predictions average sigmoid(x theta) over draws; linear ones are
    x E[theta].
    """
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    x = np.asarray(x, dtype=float)
    if task == "logistic":
        return expit(x @ draws.T).mean(axis=1)
    return x @ draws.mean(axis=0)


def auc(scores, labels):
    """Area under the ROC curve via the Mann-Whitney rank sum; ties share ranks."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    positives = int(labels.sum())
    negatives = len(labels) - positives
    if positives == 0 or negatives == 0:
        raise InvalidParameterError("AUC needs both classes")
    ranks = rankdata(scores)
    return float((ranks[labels].sum() - positives * (positives + 1) / 2.0) / (positives * negatives))


def ecdf(samples, grid):
    ordered = np.sort(np.asarray(samples, dtype=float).ravel())
    return np.searchsorted(ordered, grid, side="right") / len(ordered)


def ecdf_deviation(first, second, points=ECDF_GRID_POINTS):
    """Mean |F1 - F2| over an even grid spanning the pooled sample range."""
    pooled = np.concatenate([np.ravel(first), np.ravel(second)])
    grid = np.linspace(pooled.min(), pooled.max(), points)
    return float(np.mean(np.abs(ecdf(first, grid) - ecdf(second, grid))))


def is_trivial(estimate):
    """Two components tie (e.g. both clamped to zero by the projection)."""
    estimate = np.sort(np.asarray(estimate, dtype=float))
    return bool(np.any(np.diff(estimate) <= TIE_TOLERANCE))


def is_unordered(estimate, truth):
    return not np.array_equal(np.argsort(-np.asarray(estimate)), np.argsort(-np.asarray(truth)))


def is_unusable(estimate, truth):
    return is_trivial(estimate) or is_unordered(estimate, truth)

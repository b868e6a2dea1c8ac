"""Aggregator side: estimators and model inputs built from reports alone.

Nothing here receives client records; every entry point takes a
CollectionRun (or its report array) and the public mechanism metadata.
"""

import jax.numpy as jnp
import numpy as np
from scipy.special import expit

from ldpbayes.likelihoods import SuffStatSummary
from ldpbayes.utils.errors import InvalidParameterError


def oue_point_estimate(reports, epsilon):
    """Unbiased per-category frequency from OUE bit vectors; may leave the simplex.

    A report bit is 1 with probability 1/2 f_k + (1 - p)(1 - f_k), so
    f_k = (mean_k - (1 - p)) / (1/2 - (1 - p)).
    """
    reports = np.asarray(reports, dtype=float)
    if reports.ndim != 2 or len(reports) == 0:
        raise InvalidParameterError("OUE estimation needs a non-empty (N, d) report matrix")
    if not epsilon > 0:
        raise InvalidParameterError("epsilon = 0 reports carry no information")
    flip = 1.0 - expit(epsilon)
    return (reports.mean(axis=0) - flip) / (0.5 - flip)


def rr_mean_estimate(reports, epsilon):
    """Unbiased mean of the true bits behind randomized-response reports."""
    reports = np.asarray(reports, dtype=float)
    if len(reports) == 0:
        raise InvalidParameterError("RR estimation needs at least one report")
    p = expit(epsilon)
    if p == 0.5:
        raise InvalidParameterError("epsilon = 0 reports carry no information")
    return float((reports.mean() + p - 1.0) / (2.0 * p - 1.0))


def simplex_project(v):
    """Euclidean projection onto the probability simplex by the sorted-threshold rule."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or len(v) == 0:
        raise InvalidParameterError("simplex projection needs a non-empty vector")
    if not np.isfinite(v).all():
        raise InvalidParameterError("simplex projection needs finite components")
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    index = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - cumulative / index > 0)[0][-1]
    threshold = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - threshold, 0.0)


def summarize(run, layout):
    """Sum the perturbed statistic vectors into a SuffStatSummary."""
    mechanism = run.mechanism
    if mechanism.kind != "statistic":
        raise InvalidParameterError("summaries need a statistic-perturbation run")
    noise = np.asarray(mechanism.noise_std, dtype=float)
    reports = np.asarray(run.reports, dtype=float).reshape(-1, len(noise))
    if len(reports) == 0:
        raise InvalidParameterError("a statistic summary needs at least one report")
    return SuffStatSummary(reports.sum(axis=0), len(reports), noise**2, layout)


def _deduplicate(bits, d):
    bits = np.asarray(bits, dtype=float).reshape(-1, d)
    if len(bits) == 0:
        return np.zeros((0, d)), np.zeros(0)
    patterns, counts = np.unique(bits, axis=0, return_counts=True)
    return patterns, counts.astype(float)


def observations(model, run):
    """The data pytree `model.program` conditions on, built from the run's reports."""
    mechanism = run.mechanism
    if model.private and mechanism.kind == "noiseless":
        raise InvalidParameterError("a private model needs a perturbed run")

    if model.kind in ("gaussian", "exponential"):
        return {"z": jnp.asarray(run.reports, dtype=float).reshape(-1)}

    if model.kind == "multinomial":
        if model.private:
            patterns, weights = _deduplicate(run.reports, model.d)
            return {"patterns": jnp.asarray(patterns), "weights": jnp.asarray(weights)}
        categories = np.asarray(run.reports, dtype=int).reshape(-1)
        return {"counts": jnp.asarray(np.bincount(categories, minlength=model.d), dtype=float)}

    labels = run.labels if run.labels is not None else np.zeros(0)
    if not model.private:
        return {
            "x": jnp.asarray(run.reports, dtype=float).reshape(-1, model.d),
            "y": jnp.asarray(labels, dtype=float),
        }

    if model.kind in ("linear_ss", "logistic_ss"):
        summary = summarize(run, model.task)
        return {"Z": summary.Z, "N": float(summary.N), "SigmaStar": summary.SigmaStar}

    zx = jnp.asarray(run.reports, dtype=float).reshape(-1, model.d)
    data = {"zx": zx, "zy": jnp.asarray(labels, dtype=float), "noise_x": mechanism.features.sigma}
    if model.kind == "linear_input":
        data["noise_y"] = mechanism.label.sigma
    else:
        data["p"] = mechanism.label.p
    return data

"""Experiment drivers: calibration coverage, histogram and regression comparisons, ECDF deviation.

Each driver is a pure function of its ExperimentConfig. Repeats run on a
thread pool with generators derived from (seed, position), and results are
aggregated in task order, so reruns produce identical tables.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ldpbayes.bench import metrics
from ldpbayes.bench.runner import repeat_rng, run_repeats, sampler_for
from ldpbayes.inference import flatten_sites
from ldpbayes.mechanisms import NoiselessRelease
from ldpbayes.protocol import (
    ClientRecords,
    SGDConfig,
    collect,
    generate_data,
    ldp_sgd,
    observations,
    oue_point_estimate,
    simplex_project,
)
from ldpbayes.utils.errors import ConfigError, ExperimentFailureError, SamplingFailureError

logger = logging.getLogger(__name__)

RHAT_LIMIT = 1.1
MAX_REJECTION_RATE = 0.2


@dataclass
class ExperimentTable:
    name: str
    columns: tuple
    rows: list
    max_rhat: float = math.nan
    rejection_rate: float = 0.0
    chart: dict = field(default_factory=dict)


@dataclass
class CoverageResult(ExperimentTable):
    """Rows (epsilon, mass, coverage, repeats) for the tracked parameter."""

    parameter: str = ""
    parameter_rows: list = field(default_factory=list)

    def coverage(self, epsilon, mass):
        for row in self.rows:
            if row["epsilon"] == epsilon and row["mass"] == mass:
                return row["coverage"]
        raise KeyError((epsilon, mass))


def _posterior(model, data, config, rng):
    """Sample, returning None when the run fails or R-hat exceeds the limit."""
    try:
        chains = sampler_for(model, config.sampler).run(data, seed=int(rng.integers(2**31)))
    except SamplingFailureError as e:
        logger.warning("Sampling failed: %s", e)
        return None, math.inf
    worst = chains.rhat.max
    if not worst < RHAT_LIMIT:
        logger.warning("Rejecting run with max R-hat %.3f", worst)
        return None, worst
    return chains, worst


def _enforce(rejected, total, label):
    rate = rejected / total if total else 0.0
    if rate > MAX_REJECTION_RATE:
        raise ExperimentFailureError(
            f"{label}: {rejected} of {total} runs rejected ({rate:.0%} > {MAX_REJECTION_RATE:.0%})"
        )
    return rate


def _max_rhat(values):
    finite = [v for v in values if math.isfinite(v)]
    return max(finite) if finite else math.nan


def _mean_sd(values):
    values = np.asarray(values, dtype=float)
    sd = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return float(np.mean(values)), sd


# =========================================================================
# Coverage
# =========================================================================


def run_coverage(config):
    """Fraction of repeats whose central intervals contain the prior-drawn truth."""
    if len(config.n) != 1:
        raise ConfigError("the coverage experiment takes a single N")
    N = config.n[0]

    def repeat(task):
        i, epsilon, r = task
        rng = repeat_rng(config.seed, i, r)
        model = config.model_for(epsilon)
        params = model.draw_parameters(rng)
        records = generate_data(model, params, N, rng)
        run = collect(records, model.mechanism(), rng, model.budget)
        chains, worst = _posterior(model, observations(model, run), config, rng)
        if chains is None:
            return None, worst
        truth = flatten_sites(model.truth(params), model.sites)
        hits = {}
        for name, value in truth.items():
            for mass in config.masses:
                lo, hi = chains.interval(name, mass)
                hits[(name, mass)] = lo <= value <= hi
        return hits, worst

    tasks = [(i, eps, r) for i, eps in enumerate(config.epsilons) for r in range(config.repeats)]
    outcomes = run_repeats(repeat, tasks)

    rows, parameter_rows, rates, rhats = [], [], [], []
    parameter = config.parameter
    for i, epsilon in enumerate(config.epsilons):
        mine = [outcomes[k] for k, task in enumerate(tasks) if task[0] == i]
        accepted = [hits for hits, _ in mine if hits is not None]
        rhats += [worst for _, worst in mine]
        rates.append(_enforce(len(mine) - len(accepted), len(mine), f"coverage at epsilon={epsilon}"))

        names = sorted({name for name, _ in accepted[0]})
        parameter = parameter or names[0]
        if parameter not in names:
            raise ConfigError(f"unknown parameter {parameter!r}; choose from {', '.join(names)}")
        for mass in config.masses:
            for name in names:
                fraction = float(np.mean([hits[(name, mass)] for hits in accepted]))
                parameter_rows.append(
                    {"epsilon": epsilon, "parameter": name, "mass": mass, "coverage": fraction, "repeats": len(accepted)}
                )
                if name == parameter:
                    rows.append({"epsilon": epsilon, "mass": mass, "coverage": fraction, "repeats": len(accepted)})

    return CoverageResult(
        "coverage",
        ("epsilon", "mass", "coverage", "repeats"),
        rows,
        max_rhat=_max_rhat(rhats),
        rejection_rate=max(rates),
        chart={"x": "mass", "y": "coverage", "group": "epsilon", "reference": "diagonal"},
        parameter=parameter,
        parameter_rows=parameter_rows,
    )


# =========================================================================
# Histogram comparison
# =========================================================================


def _histogram_truth(config, model, rng):
    if config.data.theta is not None:
        return np.asarray(config.data.theta, dtype=float)
    return model.draw_parameters(rng)["theta"]


def run_histogram_compare(config):
    """Posterior mean against the simplex-projected OUE point estimate."""
    if min(config.n) < 1:
        raise ConfigError("the histogram comparison needs N >= 1")

    def repeat(task):
        j, N, i, epsilon, r = task
        rng = repeat_rng(config.seed, j, i, r)
        model = config.model_for(epsilon)
        theta = _histogram_truth(config, model, rng)
        records = generate_data(model, {"theta": theta}, N, rng)
        run = collect(records, model.mechanism(), rng, model.budget)
        chains, worst = _posterior(model, observations(model, run), config, rng)
        if chains is None:
            return None, worst
        if run.mechanism.kind == "oue":
            point = simplex_project(oue_point_estimate(run.reports, epsilon))
        else:
            point = np.bincount(run.reports.astype(int), minlength=model.d) / N
        estimates = {"posterior_mean": chains.means("theta"), "projected_point": point}
        return {
            method: (metrics.rmse(est, theta), metrics.is_unusable(est, theta))
            for method, est in estimates.items()
        }, worst

    tasks = [
        (j, N, i, eps, r)
        for j, N in enumerate(config.n)
        for i, eps in enumerate(config.epsilons)
        for r in range(config.repeats)
    ]
    outcomes = run_repeats(repeat, tasks)

    rows, rhats, rates = [], [outcome[1] for outcome in outcomes], []
    for j, N in enumerate(config.n):
        for i, epsilon in enumerate(config.epsilons):
            mine = [outcomes[k][0] for k, task in enumerate(tasks) if task[:4] == (j, N, i, epsilon)]
            accepted = [m for m in mine if m is not None]
            rates.append(_enforce(len(mine) - len(accepted), len(mine), f"histogram at N={N}, epsilon={epsilon}"))
            for method in ("posterior_mean", "projected_point"):
                errors = [m[method][0] for m in accepted]
                mean, sd = _mean_sd(errors)
                rows.append(
                    {
                        "n": N,
                        "epsilon": epsilon,
                        "method": method,
                        "rmse": mean,
                        "rmse_sd": sd,
                        "unusable": float(np.mean([m[method][1] for m in accepted])),
                        "repeats": len(accepted),
                    }
                )

    return ExperimentTable(
        "histogram",
        ("n", "epsilon", "method", "rmse", "rmse_sd", "unusable", "repeats"),
        rows,
        max_rhat=_max_rhat(rhats),
        rejection_rate=max(rates),
        chart={"x": "n", "y": "rmse", "group": "method"},
    )


# =========================================================================
# ECDF deviation
# =========================================================================


def run_ecdf_deviation(config):
    """Mean |ECDF difference| between private and non-private posteriors on shared data."""
    N = config.n[0]

    def repeat(r):
        rng = repeat_rng(config.seed, r)
        base = config.model_for(config.epsilons[0])
        theta = _histogram_truth(config, base, rng)
        records = generate_data(base, {"theta": theta}, N, rng)

        reference = base.nonprivate()
        plain = collect(records, NoiselessRelease(), rng)
        baseline, worst = _posterior(reference, observations(reference, plain), config, rng)
        rhats = [worst]
        if baseline is None:
            return None, rhats

        deviations = {}
        for i, epsilon in enumerate(config.epsilons):
            model = config.model_for(epsilon)
            run_rng = repeat_rng(config.seed, r, i)
            run = collect(records, model.mechanism(), run_rng, model.budget)
            chains, worst = _posterior(model, observations(model, run), config, run_rng)
            rhats.append(worst)
            if chains is None:
                return None, rhats
            deviations[epsilon] = {
                name: metrics.ecdf_deviation(chains.param(name), baseline.param(name)) for name in chains.names
            }
        return deviations, rhats

    outcomes = run_repeats(repeat, range(config.repeats))
    accepted = [d for d, _ in outcomes if d is not None]
    rate = _enforce(len(outcomes) - len(accepted), len(outcomes), "ecdf")

    rows = []
    for epsilon in config.epsilons:
        names = list(accepted[0][epsilon])
        for name in names:
            value = float(np.mean([d[epsilon][name] for d in accepted]))
            rows.append({"epsilon": epsilon, "parameter": name, "deviation": value, "repeats": len(accepted)})
        overall = float(np.mean([np.mean(list(d[epsilon].values())) for d in accepted]))
        rows.append({"epsilon": epsilon, "parameter": "mean", "deviation": overall, "repeats": len(accepted)})

    return ExperimentTable(
        "ecdf",
        ("epsilon", "parameter", "deviation", "repeats"),
        rows,
        max_rhat=_max_rhat([v for _, rh in outcomes for v in rh]),
        rejection_rate=rate,
        chart={"x": "epsilon", "y": "deviation", "group": "parameter"},
    )


# =========================================================================
# Regression comparison
# =========================================================================


REGRESSION_METHODS = ("ss", "input", "ldp_sgd", "nonprivate")


def _regression_truth(config, d, rng):
    theta = rng.normal(0.0, config.data.weight_scale, size=d)
    Sigma = config.data.feature_scale**2 / d * np.eye(d)
    return {"theta": theta, "Sigma": Sigma, "sigma": config.data.residual_std}


def _score(task, draws, x, y):
    prediction = metrics.predictive_mean(x, draws, task)
    if task == "logistic":
        return metrics.auc(prediction, y)
    return metrics.rmse(prediction, y)


def run_regression_compare(config):
    """Test AUC (logistic) or RMSE (linear) of SS, input, LDP-SGD and non-private fits."""
    task = config.model["kind"]
    kinds = {"ss": f"{task}_ss", "input": f"{task}_input"}
    d = int(config.model.get("d", 2))

    def repeat(work):
        j, N, r = work
        rng = repeat_rng(config.seed, j, r)
        template = config.model_for(config.epsilons[0], kind=kinds["ss"]).nonprivate()
        x, y = template.simulate(_regression_truth(config, d, rng), N, rng)
        order = rng.permutation(N)
        n_test = max(1, round(N * config.data.test_fraction))
        test, train = order[:n_test], order[n_test:]
        train_records = ClientRecords("labeled", *template.clip((x[train], y[train])))
        x_test, y_test = x[test], y[test]

        scores, rhats = {}, []
        plain = collect(train_records, NoiselessRelease(), rng)
        chains, worst = _posterior(template, observations(template, plain), config, rng)
        rhats.append(worst)
        if chains is None:
            return None, rhats
        nonprivate = _score(task, chains.pooled("theta"), x_test, y_test)

        for i, epsilon in enumerate(config.epsilons):
            scores[epsilon] = {"nonprivate": nonprivate}
            for method, kind in kinds.items():
                model = config.model_for(epsilon, kind=kind)
                run_rng = repeat_rng(config.seed, j, r, i, len(scores[epsilon]))
                run = collect(train_records, model.mechanism(), run_rng, model.budget)
                chains, worst = _posterior(model, observations(model, run), config, run_rng)
                rhats.append(worst)
                if chains is None:
                    return None, rhats
                scores[epsilon][method] = _score(task, chains.pooled("theta"), x_test, y_test)

            sgd = SGDConfig(
                epsilon,
                config.delta,
                d,
                group_constant=config.sgd.group_constant,
                learning_rate=config.sgd.learning_rate,
                clip=config.sgd.clip,
                loss="logistic" if task == "logistic" else "squared",
            )
            weights = ldp_sgd(train_records, sgd, repeat_rng(config.seed, j, r, i, 99)).weights
            scores[epsilon]["ldp_sgd"] = _score(task, weights, x_test, y_test)
        return scores, rhats

    work = [(j, N, r) for j, N in enumerate(config.n) for r in range(config.repeats)]
    outcomes = run_repeats(repeat, work)

    metric = "auc" if task == "logistic" else "rmse"
    rows, rates = [], []
    for j, N in enumerate(config.n):
        mine = [outcomes[k][0] for k, w in enumerate(work) if w[0] == j]
        accepted = [m for m in mine if m is not None]
        rates.append(_enforce(len(mine) - len(accepted), len(mine), f"regression at N={N}"))
        for epsilon in config.epsilons:
            for method in REGRESSION_METHODS:
                mean, sd = _mean_sd([m[epsilon][method] for m in accepted])
                rows.append(
                    {
                        "n": N,
                        "epsilon": epsilon,
                        "method": method,
                        "metric": metric,
                        "mean": mean,
                        "sd": sd,
                        "repeats": len(accepted),
                    }
                )

    return ExperimentTable(
        "regression",
        ("n", "epsilon", "method", "metric", "mean", "sd", "repeats"),
        rows,
        max_rhat=_max_rhat([v for _, rh in outcomes for v in rh]),
        rejection_rate=max(rates),
        chart={"x": "epsilon", "y": "mean", "group": "method"},
    )


EXPERIMENT_RUNNERS = {
    "coverage": run_coverage,
    "histogram": run_histogram_compare,
    "ecdf": run_ecdf_deviation,
    "regression": run_regression_compare,
}

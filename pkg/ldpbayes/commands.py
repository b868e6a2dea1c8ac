"""Click commands for ldp-bayes."""

import math
from dataclasses import fields
from pathlib import Path

import click
import numpy as np
import orjson
from rich.table import Table

from ldpbayes.bench import EXPERIMENT_RUNNERS, load_config, write_result
from ldpbayes.extensions import console
from ldpbayes.inference import MODELS, SamplerConfig, flatten_sites, model_from_dict, sample
from ldpbayes.mechanisms import (
    AnalyticGaussianMechanism,
    LaplaceMechanism,
    OUEMechanism,
    PrivacyBudget,
    RandomizedResponseMechanism,
    calibrate_statistic,
)
from ldpbayes.protocol import (
    ClientRecords,
    collect as collect_reports,
    generate_data,
    observations,
    read_records,
    read_run,
    write_run,
)


def _epsilon(value):
    if value is None:
        return None
    if value.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(value)
    except ValueError as e:
        raise click.BadParameter(f"{value!r} is not a number or 'inf'", param_hint="--epsilon") from e


def _budget(epsilon, delta):
    return PrivacyBudget(epsilon, delta)


def _model(kind, budget, d=None):
    options = {"kind": kind, "budget": budget.to_dict() if budget is not None else None}
    if d is not None and "d" in {f.name for f in fields(MODELS[kind])}:
        options["d"] = d
    return model_from_dict(options)


def _print_rows(title, columns, rows):
    table = Table(title=title)
    for column in columns:
        table.add_column(column, justify="right" if column not in ("method", "parameter", "metric") else "left")
    for row in rows:
        table.add_row(*(f"{row[c]:.4g}" if isinstance(row[c], float) else str(row[c]) for c in columns))
    console.print(table)


# =========================================================================
# Protocol commands
# =========================================================================


@click.command("calibrate-mech")
@click.option(
    "-m",
    "--mechanism",
    required=True,
    type=click.Choice(["laplace", "gaussian", "rr", "oue", "linear-ss", "logistic-ss"]),
    help="Mechanism to calibrate",
)
@click.option("--epsilon", required=True, help="Privacy epsilon")
@click.option("--delta", default=0.0, type=float, help="Privacy delta")
@click.option("--sensitivity", default=1.0, type=float, help="L1 (laplace) or L2 (gaussian) sensitivity")
@click.option("-d", "--d", "dim", default=3, type=int, help="Categories (oue) or features (ss)")
@click.option("--R", "R", default=1.0, type=float, help="Feature clip norm")
@click.option("--Ry", "Ry", default=1.0, type=float, help="Label clip bound")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Write the mechanism as JSON")
def calibrate_mech(mechanism, epsilon, delta, sensitivity, dim, R, Ry, out):
    """Calibrate a mechanism to a privacy budget."""
    budget = _budget(_epsilon(epsilon), delta)
    if mechanism == "laplace":
        spec = LaplaceMechanism.calibrate(sensitivity, budget)
    elif mechanism == "gaussian":
        spec = AnalyticGaussianMechanism.calibrate(sensitivity, budget)
    elif mechanism == "rr":
        spec = RandomizedResponseMechanism.from_epsilon(budget.epsilon)
    elif mechanism == "oue":
        spec = OUEMechanism.from_epsilon(budget.epsilon, dim)
    else:
        spec = calibrate_statistic(mechanism.removesuffix("-ss"), dim, budget, R, Ry)

    table = Table(title=f"{mechanism} at epsilon={budget.epsilon:g}, delta={budget.delta:g}")
    table.add_column("field")
    table.add_column("value", justify="right")
    for key, value in spec.to_dict().items():
        table.add_row(key, str(value))
    console.print(table)
    if out:
        Path(out).write_bytes(orjson.dumps(spec.to_dict(), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
        console.print(f"[green]Mechanism written to {out}[/green]")


@click.command("collect")
@click.option("--model", "model_kind", required=True, type=click.Choice(sorted(MODELS)), help="Inference model")
@click.option("--epsilon", default="1.0", help="Privacy epsilon ('inf' for no noise)")
@click.option("--delta", default=0.0, type=float, help="Privacy delta")
@click.option("-d", "--d", "dim", default=None, type=int, help="Categories or features")
@click.option("--n", "N", default=1000, type=int, help="Clients to simulate")
@click.option("--records", default=None, type=click.Path(exists=True, dir_okay=False), help="Raw records CSV")
@click.option("--seed", default=0, type=int, help="Master seed")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Collection CSV to write")
@click.option("--oracle", is_flag=True, help="Release the raw records without a mechanism")
def collect(model_kind, epsilon, delta, dim, N, records, seed, out, oracle):
    """Run every client's mechanism once and write the reports."""
    budget = None if oracle else _budget(_epsilon(epsilon), delta)
    model = _model(model_kind, budget, dim)
    rng = np.random.default_rng(seed)

    if records:
        raw = read_records(records, model.payload, getattr(model, "d", None))
        if raw.kind == "labeled":
            x, y = model.clip((raw.values, raw.labels))
            raw = ClientRecords("labeled", x, y)
        else:
            raw = ClientRecords(raw.kind, np.asarray(model.clip(raw.values)), d=raw.d)
    else:
        params = model.draw_parameters(rng)
        raw = generate_data(model, params, N, rng)
        truth = flatten_sites(model.truth(params), model.sites)
        console.print("[cyan]Generating parameters:[/cyan] " + ", ".join(f"{k}={v:.4g}" for k, v in truth.items()))

    run = collect_reports(raw, model.mechanism(), rng, model.budget)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_run(run, out)
    console.print(f"[green]{run.n} {run.mechanism.kind} reports written to {out}[/green]")


@click.command("infer")
@click.option("--model", "model_kind", required=True, type=click.Choice(sorted(MODELS)), help="Inference model")
@click.option("--run", "run_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Collection CSV")
@click.option("-d", "--d", "dim", default=None, type=int, help="Categories or features")
@click.option("--chains", default=4, type=int, help="Sampler chains")
@click.option("--draws", default=2000, type=int, help="Draws per chain, warm-up included")
@click.option("--seed", default=0, type=int, help="Sampler seed")
@click.option("--out", default=None, type=click.Path(file_okay=False), help="Directory for chains.csv and summary.json")
def infer(model_kind, run_path, dim, chains, draws, seed, out):
    """Sample the noise-aware posterior given a collection run."""
    run = read_run(run_path)
    if dim is None and run.mechanism.kind == "oue":
        dim = run.mechanism.d
    if dim is None and run.mechanism.kind == "statistic":
        dim = run.mechanism.d
    if dim is None and run.labels is not None:
        dim = np.asarray(run.reports).reshape(run.n, -1).shape[1]
    model = _model(model_kind, run.budget if run.mechanism.kind != "noiseless" else None, dim)
    config = SamplerConfig(chains=chains, draws=draws, seed=seed)
    chainset = sample(model, observations(model, run), config)

    summary = chainset.summary()
    rows = [{"parameter": name, **stats} for name, stats in summary["parameters"].items()]
    _print_rows(f"{model_kind} posterior ({run.n} reports)", ("parameter", "mean", "sd", "q5", "q50", "q95", "rhat"), rows)
    console.print(f"divergence rate {summary['divergence_rate']:.3f}")
    for warning in chainset.warnings:
        console.print(f"[yellow]{warning}[/yellow]")
    if out:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        chainset.write_csv(out / "chains.csv")
        (out / "summary.json").write_bytes(chainset.to_json())
        console.print(f"[green]Chains and summary written to {out}[/green]")


# =========================================================================
# Experiments
# =========================================================================


def experiment_options(func):
    """Flags shared by every experiment; each overrides the config file."""
    options = [
        click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False), help="Experiment YAML"),
        click.option("--model", "model_kind", default=None, help="Model kind"),
        click.option("--epsilon", "epsilons", multiple=True, help="Privacy epsilon (repeatable, 'inf' allowed)"),
        click.option("--delta", default=None, type=float, help="Privacy delta"),
        click.option("--n", "ns", multiple=True, type=int, help="Clients per run (repeatable)"),
        click.option("--repeats", default=None, type=int, help="Repeats per grid point"),
        click.option("--seed", default=None, type=int, help="Master seed"),
        click.option("--out", default=None, type=click.Path(file_okay=False), help="Output directory"),
        click.option("--plot/--no-plot", default=None, help="Also write an SVG chart"),
        click.option("--oracle", is_flag=True, default=None, help="Skip the mechanism (non-private control)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def run_experiment(kind, config_path, model_kind, epsilons, delta, ns, repeats, seed, out, plot, oracle):
    overrides = {
        "experiment": {"repeats": repeats, "seed": seed, "output_dir": out, "plot": plot, "oracle": oracle or None},
        "privacy": {"epsilon": [_epsilon(e) for e in epsilons] or None, "delta": delta},
        "data": {"n": list(ns) or None},
        "model": {"kind": model_kind},
    }
    config = load_config(kind, config_path, overrides)
    console.print(
        f"[cyan]{kind}[/cyan]: model={config.model['kind']} epsilon={list(config.epsilons)} "
        f"n={list(config.n)} repeats={config.repeats} seed={config.seed}"
    )
    result = EXPERIMENT_RUNNERS[kind](config)
    _print_rows(kind, result.columns, result.rows)
    console.print(f"max R-hat {result.max_rhat:.4f}, rejection rate {result.rejection_rate:.1%}")
    for path in write_result(result, config):
        console.print(f"[green]Wrote {path}[/green]")
    return result


@click.command("coverage")
@experiment_options
def coverage(**kwargs):
    """Credible-interval calibration over prior-drawn truths."""
    run_experiment("coverage", **kwargs)


@click.command("compare-histogram")
@experiment_options
def compare_histogram(**kwargs):
    """Posterior mean against the projected OUE point estimate."""
    run_experiment("histogram", **kwargs)


@click.command("compare-regression")
@experiment_options
def compare_regression(**kwargs):
    """SS and input models against LDP-SGD and the non-private fit."""
    run_experiment("regression", **kwargs)


@click.command("ecdf")
@experiment_options
def ecdf(**kwargs):
    """ECDF deviation of private from non-private posteriors."""
    run_experiment("ecdf", **kwargs)

import math
import os

import numpy as np
import pytest

from ldpbayes.bench import (
    ExperimentTable,
    load_config,
    read_table,
    run_coverage,
    run_ecdf_deviation,
    run_histogram_compare,
    run_regression_compare,
    write_result,
    write_table,
)
from ldpbayes.bench.metrics import auc, ecdf_deviation, is_trivial, is_unordered, predictive_mean, rmse
from ldpbayes.bench.runner import repeat_rng, run_repeats
from ldpbayes.settings import Config
from ldpbayes.utils.errors import ConfigError, InvalidParameterError

TINY_COVERAGE = """
    experiment:
      kind: coverage
      repeats: 2
      seed: 3
      masses: [0.5, 0.9]
    privacy:
      epsilon: [2.0]
    data:
      n: [300]
    model:
      kind: multinomial
      d: 3
    sampler:
      chains: 2
      draws: 600
"""


# =========================================================================
# Metrics
# =========================================================================


def test_auc_extremes():
    labels = np.array([0, 0, 1, 1])
    assert auc([0.1, 0.2, 0.8, 0.9], labels) == 1.0
    assert auc([0.9, 0.8, 0.2, 0.1], labels) == 0.0
    with pytest.raises(InvalidParameterError):
        auc([0.1, 0.2], [1, 1])


def test_auc_matches_pairwise_count():
    rng = np.random.default_rng(50)
    scores = rng.integers(0, 5, size=60).astype(float)
    labels = rng.integers(0, 2, size=60)
    pos, neg = scores[labels == 1], scores[labels == 0]
    wins = sum((p > n) + 0.5 * (p == n) for p in pos for n in neg)
    assert auc(scores, labels) == pytest.approx(wins / (len(pos) * len(neg)), abs=1e-12)


def test_rmse():
    assert rmse([1.0, 2.0], [1.0, 4.0]) == pytest.approx(math.sqrt(2.0))


def test_predictive_mean_averages_probabilities():
    draws = np.array([[10.0, 1.0], [-10.0, 1.0]])
    x = np.array([[1.0, 0.5], [0.0, 0.2]])
    # x @ E[theta] ranks the first row higher; averaged probabilities rank the second
    assert (x @ draws.mean(axis=0))[0] > (x @ draws.mean(axis=0))[1]
    probabilities = predictive_mean(x, draws, "logistic")
    assert probabilities[0] == pytest.approx(0.5, abs=1e-3)
    assert probabilities[1] > probabilities[0]
    assert auc(probabilities, [0, 1]) == 1.0
    np.testing.assert_allclose(predictive_mean(x, draws, "linear"), x @ draws.mean(axis=0))
    assert predictive_mean(x, draws[0], "linear").shape == (2,)


def test_ecdf_deviation_identical_samples():
    sample = np.random.default_rng(51).normal(size=300)
    assert ecdf_deviation(sample, sample) == 0.0


def test_ecdf_deviation_matches_direct_count():
    first, second = np.array([0.0, 1.0]), np.array([2.0, 3.0])
    grid = np.linspace(0.0, 3.0, 512)
    total = 0.0
    for g in grid:
        f1 = sum(v <= g for v in first) / len(first)
        f2 = sum(v <= g for v in second) / len(second)
        total += abs(f1 - f2)
    assert ecdf_deviation(first, second) == pytest.approx(total / len(grid), abs=1e-12)


def test_unusable_estimates():
    truth = np.array([0.7, 0.2, 0.1])
    assert is_trivial([0.8, 0.2, 0.0, 0.0])
    assert not is_trivial([0.6, 0.3, 0.1])
    assert is_unordered([0.2, 0.7, 0.1], truth)
    assert not is_unordered([0.5, 0.3, 0.2], truth)


# =========================================================================
# Configuration
# =========================================================================


def test_defaults_per_experiment():
    config = load_config("coverage")
    assert config.model["kind"] == "gaussian"
    assert config.epsilons == (0.5, 1.0, 2.0)
    assert config.n == (2000,)
    assert config.repeats == 200
    histogram = load_config("histogram")
    assert histogram.data.theta == (0.7, 0.2, 0.1)


def test_file_then_overrides(write_yaml):
    path = write_yaml(
        """
        experiment:
          repeats: 5
          seed: 11
        privacy:
          epsilon: [1.0, inf]
          delta: 1.0e-6
        """
    )
    config = load_config("coverage", path, {"experiment": {"repeats": 9, "seed": None}})
    assert config.repeats == 9
    assert config.seed == 11
    assert config.epsilons == (1.0, math.inf)
    assert config.delta == 1e-6


def test_multinomial_dimension_follows_theta(write_yaml):
    path = write_yaml(
        """
        data:
          theta: [0.4, 0.3, 0.2, 0.1]
        """
    )
    assert load_config("histogram", path).model["d"] == 4


def test_unknown_key_reports_line(write_yaml):
    path = write_yaml(
        """
        experiment:
          repeats: 3
        privacy:
          epsilon: 1.0
          colour: red
        """
    )
    with pytest.raises(ConfigError) as info:
        load_config("coverage", path)
    assert info.value.line == 5
    assert "privacy.colour" in str(info.value)


def test_unknown_section_reports_line(write_yaml):
    path = write_yaml(
        """
        experiment:
          repeats: 3
        plotting:
          dpi: 300
        """
    )
    with pytest.raises(ConfigError) as info:
        load_config("coverage", path)
    assert info.value.line == 3


def test_malformed_yaml(write_yaml):
    path = write_yaml(
        """
        experiment:
          repeats: [1, 2
        """
    )
    with pytest.raises(ConfigError) as info:
        load_config("coverage", path)
    assert info.value.line is not None


@pytest.mark.parametrize(
    "kind, text",
    [
        ("coverage", "experiment:\n  repeats: 0\n"),
        ("histogram", "model:\n  kind: gaussian\n"),
        ("regression", "model:\n  kind: gaussian\n"),
        ("coverage", "experiment:\n  kind: ecdf\n"),
        ("coverage", "privacy:\n  epsilon: [-1.0]\n"),
        ("regression", "data:\n  test_fraction: 1.5\n"),
        ("coverage", "sampler:\n  chains: 1\n"),
    ],
)
def test_invalid_configs(write_yaml, kind, text):
    with pytest.raises(ConfigError):
        load_config(kind, write_yaml(text))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config("coverage", tmp_path / "absent.yaml")


def test_shipped_configs_load():
    directory = Config.EXPERIMENTS_CONFIG_PATH
    for name in sorted(os.listdir(directory)):
        if name.startswith("_") or not name.endswith(".yaml"):
            continue
        kind = name.removesuffix(".yaml").split("_")[0]
        config = load_config(kind, os.path.join(directory, name))
        assert config.repeats >= 1


# =========================================================================
# Runner and output
# =========================================================================


def test_repeat_rng_depends_on_position():
    first = repeat_rng(1, 0, 2).random()
    assert first == repeat_rng(1, 0, 2).random()
    assert first != repeat_rng(1, 2, 0).random()


def test_run_repeats_keeps_task_order():
    assert run_repeats(lambda t: t * t, range(20), threads=4) == [t * t for t in range(20)]


def test_table_round_trip(tmp_path):
    rows = [{"epsilon": 2.0, "coverage": 0.9}, {"epsilon": 0.5, "coverage": 0.1}]
    path = write_table(
        tmp_path / "out" / "table.csv",
        ("epsilon", "coverage"),
        rows,
        header={"config": {"seed": 1}},
        sort_by=("epsilon",),
    )
    header, restored = read_table(path)
    assert header == {"config": {"seed": 1}}
    assert [r["epsilon"] for r in restored] == ["0.5", "2.0"]
    assert restored[1]["coverage"] == "0.9"


def test_write_result_is_byte_identical(tmp_path, write_yaml):
    config = load_config("coverage", write_yaml(TINY_COVERAGE), {"experiment": {"plot": True}})
    result = ExperimentTable(
        "coverage",
        ("epsilon", "mass", "coverage", "repeats"),
        [{"epsilon": 2.0, "mass": 0.9, "coverage": 1.0, "repeats": 2},
         {"epsilon": 2.0, "mass": 0.5, "coverage": 0.5, "repeats": 2}],
        max_rhat=1.01,
        chart={"x": "mass", "y": "coverage", "group": "epsilon", "reference": "diagonal"},
    )
    first = write_result(result, config, tmp_path / "a")
    second = write_result(result, config, tmp_path / "b")
    assert [p.name for p in first] == ["coverage.csv", "coverage.svg"]
    for a, b in zip(first, second, strict=True):
        assert a.read_bytes() == b.read_bytes()
    header, rows = read_table(first[0])
    assert header["max_rhat"] == 1.01
    assert [r["mass"] for r in rows] == ["0.5", "0.9"]


# =========================================================================
# Experiments
# =========================================================================


def test_tiny_coverage_run(write_yaml):
    result = run_coverage(load_config("coverage", write_yaml(TINY_COVERAGE)))
    assert result.parameter == "theta[0]"
    assert len(result.rows) == 2
    assert {r["coverage"] for r in result.rows} <= {0.0, 0.5, 1.0}
    assert len(result.parameter_rows) == 2 * 3
    assert result.max_rhat < 1.1


def test_coverage_is_deterministic(tmp_path, write_yaml):
    config = load_config("coverage", write_yaml(TINY_COVERAGE))
    first = write_result(run_coverage(config), config, tmp_path / "a")
    second = write_result(run_coverage(config), config, tmp_path / "b")
    for a, b in zip(first, second, strict=True):
        assert a.read_bytes() == b.read_bytes()


def test_coverage_needs_single_n(write_yaml):
    config = load_config("coverage", write_yaml(TINY_COVERAGE), {"data": {"n": [100, 200]}})
    with pytest.raises(ConfigError):
        run_coverage(config)


def test_tiny_histogram_run(write_yaml):
    path = write_yaml(
        """
        experiment:
          repeats: 2
        privacy:
          epsilon: [2.0]
        data:
          n: [200]
        sampler:
          chains: 2
          draws: 600
        """
    )
    result = run_histogram_compare(load_config("histogram", path))
    assert [r["method"] for r in result.rows] == ["posterior_mean", "projected_point"]
    for row in result.rows:
        assert 0.0 <= row["unusable"] <= 1.0
        assert row["rmse"] > 0.0


# =========================================================================
# Desk-scale acceptance runs
# =========================================================================


def _shipped(name):
    return os.path.join(Config.EXPERIMENTS_CONFIG_PATH, name)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["coverage_gaussian.yaml", "coverage_multinomial.yaml", "coverage_exponential.yaml"])
def test_coverage_calibration(name):
    result = run_coverage(load_config("coverage", _shipped(name)))
    assert result.max_rhat < 1.1
    for row in result.rows:
        assert abs(row["coverage"] - row["mass"]) <= 0.05


@pytest.mark.slow
def test_posterior_mean_beats_projected_estimate():
    result = run_histogram_compare(load_config("histogram", _shipped("histogram.yaml")))
    for N in (100, 500):
        by_method = {r["method"]: r["rmse"] for r in result.rows if r["n"] == N}
        assert by_method["posterior_mean"] <= by_method["projected_point"]


@pytest.mark.slow
def test_ecdf_deviation_shrinks_with_epsilon():
    result = run_ecdf_deviation(load_config("ecdf", _shipped("ecdf.yaml")))
    means = [r["deviation"] for r in sorted(result.rows, key=lambda r: r["epsilon"]) if r["parameter"] == "mean"]
    assert all(later < earlier for earlier, later in zip(means, means[1:], strict=False))


@pytest.mark.slow
def test_regression_sanity():
    config = load_config(
        "regression",
        _shipped("regression.yaml"),
        {"privacy": {"epsilon": [0.3, 0.8, 2.0, 5.0, math.inf]}},
    )
    result = run_regression_compare(config)
    score = {(r["epsilon"], r["method"]): r["mean"] for r in result.rows}
    assert abs(score[(math.inf, "ss")] - score[(math.inf, "nonprivate")]) <= 0.02
    finite = [score[(eps, "ss")] for eps in (0.3, 0.8, 2.0, 5.0)]
    assert all(later >= earlier for earlier, later in zip(finite, finite[1:], strict=False))

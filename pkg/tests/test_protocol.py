import inspect
import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import pytest
from scipy.special import expit
from scipy.stats import norm

import ldpbayes.protocol.aggregator as aggregator
from ldpbayes.inference import GaussianModel, LinearSSModel, LogisticInputModel, MultinomialModel
from ldpbayes.mechanisms import (
    ClipBounds,
    NoiselessRelease,
    OUEMechanism,
    PrivacyBudget,
    RandomizedResponseMechanism,
    StatisticPerturbation,
    calibrate_gaussian,
)
from ldpbayes.protocol import (
    ClientRecords,
    SGDConfig,
    collect,
    generate_data,
    ldp_sgd,
    observations,
    oue_point_estimate,
    read_records,
    read_run,
    rr_mean_estimate,
    simplex_project,
    summarize,
    write_run,
)
from ldpbayes.protocol.io import read_header
from ldpbayes.utils.errors import ConfigError, InvalidParameterError


@dataclass(frozen=True)
class CountingRelease:
    kind: ClassVar[str] = "noiseless"
    calls: list

    def perturb(self, value, rng):
        self.calls.append(value)
        return value


def test_collect_invokes_mechanism_once_per_client(rng):
    records = ClientRecords("scalar", rng.normal(size=257))
    mech = CountingRelease([])
    run = collect(records, mech, rng)
    assert len(mech.calls) == 257
    assert run.invocations == 257
    assert run.n == 257
    assert len(set(run.seeds.tolist())) == 257


def test_collect_rejects_mismatched_payload(rng):
    records = ClientRecords("category", np.array([0, 1]), d=2)
    with pytest.raises(InvalidParameterError):
        collect(records, RandomizedResponseMechanism.from_epsilon(1.0), rng)


def test_collect_is_reproducible():
    records = ClientRecords("category", np.array([0, 2, 1, 1]), d=3)
    mech = OUEMechanism.from_epsilon(1.0, 3)
    first = collect(records, mech, np.random.default_rng(5))
    second = collect(records, mech, np.random.default_rng(5))
    np.testing.assert_array_equal(first.reports, second.reports)


def test_generate_data_clips_gaussian(rng):
    model = GaussianModel(bounds=ClipBounds(-1.0, 1.0))
    records = generate_data(model, {"mu": 0.0, "sigma": 1.0}, 100_000, rng)
    at_bounds = np.mean(np.abs(records.values) == 1.0)
    expected = 2 * norm.cdf(-1.0)
    assert abs(at_bounds - expected) < 5 * math.sqrt(expected * (1 - expected) / 100_000)


def test_generate_data_handles_empty_runs(rng):
    records = generate_data(LinearSSModel(), {}, 0, rng)
    assert len(records) == 0
    assert records.values.shape == (0, 2)


def test_generate_data_clips_regression_features(rng):
    model = LogisticInputModel(d=3, R=1.0)
    params = {"theta": np.ones(3), "Sigma": 4.0 * np.eye(3)}
    records = generate_data(model, params, 500, rng)
    assert np.linalg.norm(records.values, axis=1).max() <= 1.0 + 1e-12
    assert set(np.unique(records.labels)) <= {0.0, 1.0}


# =========================================================================
# Estimators
# =========================================================================


def test_oue_point_estimate_is_unbiased(rng):
    eps, theta = 1.0, np.array([0.5, 0.3, 0.2])
    model = MultinomialModel(d=3, budget=PrivacyBudget(eps))
    records = generate_data(model, {"theta": theta}, 50_000, rng)
    run = collect(records, model.mechanism(), rng, model.budget)
    estimate = oue_point_estimate(run.reports, eps)
    p = expit(eps)
    flip = 1 - p
    se = math.sqrt(0.25 / 50_000) / (0.5 - flip)
    assert np.all(np.abs(estimate - theta) < 5 * se)
    with pytest.raises(InvalidParameterError):
        oue_point_estimate(run.reports, 0.0)


def test_oue_estimate_variance_falls_with_epsilon(rng):
    theta = np.array([0.5, 0.3, 0.2])
    repeats, N = 400, 2000
    categories = rng.choice(3, size=(repeats, N), p=theta)
    hot = np.eye(3, dtype=bool)[categories]
    variances = []
    for eps in (0.5, 1.0, 2.0, 4.0):
        p_one = np.where(hot, 0.5, 1.0 - expit(eps))
        reports = (rng.random(hot.shape) < p_one).astype(np.int8)
        estimates = np.array([oue_point_estimate(r, eps) for r in reports])
        variances.append(estimates.var(axis=0).sum())
    assert all(a > b for a, b in zip(variances, variances[1:], strict=False))


def test_rr_mean_estimate_is_unbiased(rng):
    eps = 0.8
    bits = (rng.random(50_000) < 0.3).astype(int)
    run = collect(ClientRecords("bit", bits), RandomizedResponseMechanism.from_epsilon(eps), rng)
    p = expit(eps)
    se = 0.5 / (2 * p - 1) / math.sqrt(50_000)
    assert abs(rr_mean_estimate(run.reports, eps) - bits.mean()) < 5 * se
    with pytest.raises(InvalidParameterError):
        rr_mean_estimate(run.reports, 0.0)


def test_simplex_projection_optimality():
    rng = np.random.default_rng(40)
    for _ in range(50):
        v = rng.normal(0.3, 1.0, size=6)
        w = simplex_project(v)
        assert w.sum() == pytest.approx(1.0)
        assert np.all(w >= 0)
        # KKT: v - w is constant on the support and no smaller off it
        shift = v - w
        support = w > 0
        assert np.ptp(shift[support]) < 1e-12
        assert np.all(v[~support] <= shift[support][0] + 1e-12)


def test_simplex_projection_fixes_simplex_points():
    w = np.array([0.2, 0.5, 0.3])
    np.testing.assert_allclose(simplex_project(w), w)
    np.testing.assert_allclose(simplex_project([2.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    with pytest.raises(InvalidParameterError):
        simplex_project([])
    with pytest.raises(InvalidParameterError):
        simplex_project([0.5, np.nan])


def test_summarize_statistic_run(rng):
    x = rng.normal(size=(30, 2)) * 0.3
    y = rng.integers(0, 2, 30).astype(float)
    mech = StatisticPerturbation("logistic", 2, (0.5,) * 5)
    run = collect(ClientRecords("labeled", x, y), mech, rng)
    summary = summarize(run, "logistic")
    assert summary.N == 30
    np.testing.assert_allclose(summary.SigmaStar, 0.25)
    np.testing.assert_allclose(summary.Z, run.reports.sum(axis=0))


def test_observations_for_noiseless_statistic(rng):
    model = LinearSSModel(budget=PrivacyBudget(math.inf, 1e-5))
    records = generate_data(model, model.draw_parameters(rng), 50, rng)
    run = collect(records, model.mechanism(), rng, model.budget)
    data = observations(model, run)
    assert float(data["N"]) == 50
    np.testing.assert_array_equal(np.asarray(data["SigmaStar"]), 0.0)


def test_private_model_refuses_raw_reports(rng):
    model = GaussianModel(budget=PrivacyBudget(1.0))
    run = collect(ClientRecords("scalar", np.zeros(3)), NoiselessRelease(), rng)
    with pytest.raises(InvalidParameterError):
        observations(model, run)


def test_aggregator_never_touches_client_records():
    source = inspect.getsource(aggregator)
    assert "ClientRecords" not in source
    assert "generate_data" not in source
    assert ".payload(" not in source


# =========================================================================
# LDP-SGD
# =========================================================================


def test_sgd_message_count(rng):
    x = rng.normal(size=(1000, 2)) * 0.3
    y = (x[:, 0] > 0).astype(float)
    config = SGDConfig(1.0, 1e-5, 2)
    assert config.group_size == math.ceil(2 * math.log(2))
    result = ldp_sgd(ClientRecords("labeled", x, y), config, rng)
    assert result.messages == 2 * 1000 - config.group_size
    assert result.groups == math.ceil(1000 / config.group_size)


def test_sgd_single_group_when_too_few_clients(rng):
    x = rng.normal(size=(10, 2))
    config = SGDConfig(0.1, 1e-5, 2)
    result = ldp_sgd(ClientRecords("labeled", x, np.zeros(10)), config, rng)
    assert result.groups == 1
    assert result.messages == 10


def test_sgd_noiseless_separable_accuracy(rng):
    x = rng.uniform(-1.0, 1.0, size=(6000, 2))
    x = x[np.abs(x[:, 0]) > 0.05][:5000]
    y = (x[:, 0] > 0).astype(float)
    config = SGDConfig(math.inf, 1e-5, 2)
    weights = ldp_sgd(ClientRecords("labeled", x, y), config, rng).weights
    accuracy = np.mean(((x @ weights) > 0) == (y == 1))
    assert accuracy >= 0.95


def test_sgd_config_validation():
    with pytest.raises(InvalidParameterError):
        SGDConfig(1.0, 1e-5, 2, loss="hinge")
    with pytest.raises(InvalidParameterError):
        SGDConfig(1.0, 1e-5, 0)
    with pytest.raises(InvalidParameterError):
        SGDConfig(0.0, 1e-5, 2)
    with pytest.raises(InvalidParameterError):
        SGDConfig(1.0, 1e-5, 2, clip=0.0)


def test_sgd_noise_scales_with_clip():
    base = SGDConfig(1.0, 1e-5, 2)
    wide = SGDConfig(1.0, 1e-5, 2, clip=2.0)
    assert wide.sensitivity == 4.0
    assert wide.noise_std == pytest.approx(calibrate_gaussian(4.0, PrivacyBudget(1.0, 1e-5)))
    assert wide.noise_std == pytest.approx(2.0 * base.noise_std, rel=1e-9)
    assert SGDConfig(math.inf, 1e-5, 2, clip=2.0).noise_std == 0.0


# =========================================================================
# Files
# =========================================================================


def test_run_file_round_trip(tmp_path, rng):
    model = MultinomialModel(d=4, budget=PrivacyBudget(1.5))
    records = generate_data(model, {"theta": np.full(4, 0.25)}, 20, rng)
    run = collect(records, model.mechanism(), rng, model.budget)
    path = write_run(run, tmp_path / "run.csv")
    restored = read_run(path)
    assert restored.mechanism == run.mechanism
    assert restored.budget == run.budget
    assert restored.invocations == 20
    np.testing.assert_array_equal(restored.reports, run.reports)


def test_read_labeled_records(tmp_path):
    path = tmp_path / "records.csv"
    path.write_text("x0,x1,y\n0.1,0.2,1\n-0.3,0.4,0\n")
    records = read_records(path, "labeled")
    assert records.values.shape == (2, 2)
    np.testing.assert_array_equal(records.labels, [1.0, 0.0])
    with pytest.raises(ConfigError):
        read_records(path, "scalar")


def test_malformed_header_reports_line():
    with pytest.raises(ConfigError) as info:
        read_header(["# mechanism: {}\n", "# broken\n"], source="run.csv")
    assert info.value.line == 2

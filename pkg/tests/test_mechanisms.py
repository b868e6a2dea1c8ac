import math

import numpy as np
import pytest

from ldpbayes.mechanisms import (
    AnalyticGaussianMechanism,
    ClipBounds,
    LaplaceMechanism,
    OUEMechanism,
    PrivacyBudget,
    RandomizedResponseMechanism,
    SensitivityInputs,
    calibrate_gaussian,
    calibrate_statistic,
    clip_norm,
    clip_scalar,
    gaussian_privacy_profile,
    mechanism_from_dict,
    optimal_logreg_noise_ratio,
    sens_input_x,
    sens_linreg,
    sens_logreg_ss,
    statistic_blocks,
    statistic_dim,
    sufficient_statistic,
)
from ldpbayes.mechanisms.perturb import laplace_perturb, oue_perturb, rr_perturb
from ldpbayes.utils.errors import InvalidParameterError, UnsupportedBudgetError


def test_privacy_budget_validation():
    with pytest.raises(InvalidParameterError):
        PrivacyBudget(-1.0)
    with pytest.raises(InvalidParameterError):
        PrivacyBudget(1.0, 1.5)
    assert PrivacyBudget(math.inf).is_noiseless
    assert PrivacyBudget(1.0).is_pure


def test_budget_split_halves_delta():
    label, features = PrivacyBudget(2.0, 1e-5).split(0.25)
    assert label.epsilon == pytest.approx(0.5)
    assert features.epsilon == pytest.approx(1.5)
    assert label.delta == features.delta == pytest.approx(5e-6)


def test_clip_scalar_and_norm():
    bounds = ClipBounds(-5.0, 5.0)
    assert clip_scalar(7.0, bounds) == 5.0
    assert clip_scalar(-7.0, bounds) == -5.0
    assert clip_scalar(1.5, bounds) == 1.5
    np.testing.assert_allclose(clip_norm([3.0, 4.0], 1.0), [0.6, 0.8])
    v = np.array([0.1, -0.2])
    np.testing.assert_array_equal(clip_norm(v, 1.0), v)


def test_clip_norm_rows():
    x = np.array([[3.0, 4.0], [0.0, 0.0], [0.3, 0.4]])
    out = clip_norm(x, 2.0)
    np.testing.assert_allclose(np.linalg.norm(out, axis=1), [2.0, 0.0, 0.5])


def test_gaussian_calibration_meets_delta():
    rng = np.random.default_rng(0)
    for _ in range(100):
        delta2 = rng.uniform(0.1, 10.0)
        eps = rng.uniform(0.1, 10.0)
        delta = 10 ** rng.uniform(-8, -2)
        sigma = calibrate_gaussian(delta2, PrivacyBudget(eps, delta))
        assert abs(gaussian_privacy_profile(delta2, sigma, eps) - delta) <= 1e-9


def test_gaussian_calibration_needs_delta():
    with pytest.raises(UnsupportedBudgetError):
        calibrate_gaussian(1.0, PrivacyBudget(1.0, 0.0))
    with pytest.raises(InvalidParameterError):
        calibrate_gaussian(1.0, PrivacyBudget(math.inf, 1e-5))


def test_gaussian_sigma_decreases_with_epsilon():
    sigmas = [calibrate_gaussian(2.0, PrivacyBudget(eps, 1e-5)) for eps in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(sigmas, sigmas[1:], strict=False))


def test_gaussian_sigma_linear_in_sensitivity():
    budget = PrivacyBudget(1.0, 1e-5)
    base = calibrate_gaussian(1.0, budget)
    for delta2 in (0.25, 3.0, 40.0):
        assert calibrate_gaussian(delta2, budget) == pytest.approx(delta2 * base, rel=1e-9)


def test_gaussian_sigma_decreases_with_delta():
    sigmas = [calibrate_gaussian(1.0, PrivacyBudget(1.0, delta)) for delta in (1e-8, 1e-6, 1e-4, 1e-2)]
    assert all(a > b for a, b in zip(sigmas, sigmas[1:], strict=False))


def test_laplace_scale():
    mech = LaplaceMechanism.for_bounds(ClipBounds(-5.0, 5.0), 2.0)
    assert mech.scale == pytest.approx(5.0)
    with pytest.raises(InvalidParameterError):
        LaplaceMechanism.calibrate(1.0, PrivacyBudget(math.inf))


def test_laplace_noise_moments():
    rng = np.random.default_rng(1)
    noise = laplace_perturb(np.zeros(200_000), 2.0, rng)
    assert abs(noise.mean()) < 5 * math.sqrt(8.0 / len(noise))
    assert noise.var() == pytest.approx(8.0, rel=0.02)


class LowestDraw:
    """Generator stand-in whose uniform draw is always the lower bound."""

    def uniform(self, low, high, size=None):
        return np.full(size or (), low, dtype=float)


def test_laplace_noise_finite_at_lowest_draw():
    out = laplace_perturb(np.zeros(3), 1.0, LowestDraw())
    assert np.all(np.isfinite(out))
    assert np.isfinite(laplace_perturb(0.0, 1.0, LowestDraw()))


def test_rr_keep_probability():
    rng = np.random.default_rng(2)
    eps = 1.0
    reports = rr_perturb(np.ones(100_000, dtype=int), eps, rng)
    p = math.exp(eps) / (1 + math.exp(eps))
    se = math.sqrt(p * (1 - p) / len(reports))
    assert abs(reports.mean() - p) < 5 * se
    assert RandomizedResponseMechanism.from_epsilon(eps).epsilon == pytest.approx(eps)


def test_oue_bit_probabilities():
    rng = np.random.default_rng(3)
    eps, d, k = 1.5, 4, 2
    bits = np.array([oue_perturb(k, d, eps, rng) for _ in range(40_000)])
    flip = 1.0 / (1.0 + math.exp(eps))
    se = math.sqrt(0.25 / len(bits))
    assert abs(bits[:, k].mean() - 0.5) < 5 * se
    others = np.delete(bits, k, axis=1)
    assert np.all(np.abs(others.mean(axis=0) - flip) < 5 * se)
    with pytest.raises(InvalidParameterError):
        oue_perturb(d, d, eps, rng)


def test_oue_epsilon_round_trips():
    mech = OUEMechanism.from_epsilon(0.7, 5)
    assert mech.q == 0.5
    assert mech.epsilon == pytest.approx(0.7)


def test_sensitivity_special_cases():
    assert sens_linreg(SensitivityInputs(R=1.0, Ry=2.0)) == pytest.approx(math.sqrt(34.0))
    assert sens_logreg_ss(1.0, 1.0, 1.0) == pytest.approx(math.sqrt(4.5))
    assert sens_logreg_ss(1.0, 1.0, 2.0) == pytest.approx(math.sqrt(4.5))
    assert sens_logreg_ss(2.0, 0.5, 1.0) == pytest.approx(math.sqrt(18.0))
    assert sens_input_x(1.0) == 2.0


def test_optimal_logistic_ratio_minimizes_sensitivity():
    for R in (0.5, 1.0, 2.0):
        best = optimal_logreg_noise_ratio(R)
        grid = np.linspace(0.05, 10.0, 20_000)
        values = [sens_logreg_ss(R, 1.0, r) for r in grid]
        assert sens_logreg_ss(R, 1.0, best) == pytest.approx(2.0 * R)
        assert sens_logreg_ss(R, 1.0, best) <= min(values) + 1e-9


def _unit_ball(rng, n, d, R):
    x = rng.normal(size=(n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return R * x * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)


def _scaled_distance(first, second, layout, d, ratios):
    per_block = {"xx": 1.0, "xy": ratios[0], "yy": ratios[-1]}
    if layout == "logistic":
        per_block = {"xx": ratios[0], "xy": 1.0}
    scale = np.array([per_block[b] for b in statistic_blocks(d, layout)])
    return np.linalg.norm((first - second) / scale, axis=-1)


def test_linear_sensitivity_bounds_random_pairs():
    rng = np.random.default_rng(4)
    d, n, R, Ry = 3, 100_000, 1.0, 2.0
    bound = sens_linreg(SensitivityInputs(R, Ry))
    x, xp = _unit_ball(rng, n, d, R), _unit_ball(rng, n, d, R)
    y, yp = rng.uniform(-Ry, Ry, n), rng.uniform(-Ry, Ry, n)
    first = sufficient_statistic(x, y, "linear")
    second = sufficient_statistic(xp, yp, "linear")
    assert _scaled_distance(first, second, "linear", d, (1.0, 1.0)).max() <= bound


def test_linear_sensitivity_attained():
    # with sigma3 -> inf the label-square term vanishes and the bound is reached
    s = SensitivityInputs(1.0, 1.0, 1.0, 1.0, 1e6)
    x = np.array([1.0, 0.0])
    xp = np.array([0.5, math.sqrt(0.75)])
    first = sufficient_statistic(x, 1.0, "linear")
    second = sufficient_statistic(xp, -1.0, "linear")
    distance = _scaled_distance(first, second, "linear", 2, (1.0, 1e6))
    assert distance == pytest.approx(sens_linreg(s), abs=1e-6)


def test_logistic_sensitivity_bounds_random_pairs():
    rng = np.random.default_rng(5)
    d, n, R = 3, 100_000, 1.0
    bound = sens_logreg_ss(R, 1.0, 1.0)
    x, xp = _unit_ball(rng, n, d, R), _unit_ball(rng, n, d, R)
    y, yp = rng.integers(0, 2, n), rng.integers(0, 2, n)
    first = sufficient_statistic(x, y, "logistic")
    second = sufficient_statistic(xp, yp, "logistic")
    assert _scaled_distance(first, second, "logistic", d, (1.0,)).max() <= bound


@pytest.mark.parametrize("ratio", [0.5, math.sqrt(2.0), 3.0])
def test_logistic_sensitivity_bounds_other_ratios(ratio):
    rng = np.random.default_rng(6)
    d, n, R = 2, 50_000, 1.0
    bound = sens_logreg_ss(R, 1.0, ratio)
    x, xp = _unit_ball(rng, n, d, R), _unit_ball(rng, n, d, R)
    y, yp = rng.integers(0, 2, n), rng.integers(0, 2, n)
    first = sufficient_statistic(x, y, "logistic")
    second = sufficient_statistic(xp, yp, "logistic")
    assert _scaled_distance(first, second, "logistic", d, (ratio,)).max() <= bound


def test_logistic_sensitivity_attained():
    x = np.array([1.0, 0.0])
    xp = np.array([0.5, math.sqrt(0.75)])
    first = sufficient_statistic(x, 1.0, "logistic")
    second = sufficient_statistic(xp, 0.0, "logistic")
    distance = _scaled_distance(first, second, "logistic", 2, (1.0,))
    assert distance == pytest.approx(math.sqrt(4.5), abs=1e-6)


def test_statistic_dimensions():
    assert statistic_dim(2, "linear") == 3 + 2 + 1
    assert statistic_dim(3, "logistic") == 6 + 3
    assert len(sufficient_statistic(np.ones(3), 1.0, "logistic")) == 9


def test_calibrate_statistic_blocks():
    budget = PrivacyBudget(1.0, 1e-5)
    mech = calibrate_statistic("linear", 2, budget, ratios=(2.0, 3.0))
    sigma1 = mech.noise_std[0]
    assert mech.noise_std[3] == pytest.approx(2.0 * sigma1)
    assert mech.noise_std[-1] == pytest.approx(3.0 * sigma1)
    expected = calibrate_gaussian(sens_linreg(SensitivityInputs(1.0, 1.0, 1.0, 2.0, 3.0)), budget)
    assert sigma1 == pytest.approx(expected)


def test_mechanism_from_dict_rebuilds_input_perturbation():
    from ldpbayes.mechanisms import InputPerturbation

    mech = InputPerturbation(
        AnalyticGaussianMechanism.calibrate(2.0, PrivacyBudget(1.0, 1e-5)),
        RandomizedResponseMechanism.from_epsilon(1.0),
    )
    assert mechanism_from_dict(mech.to_dict()) == mech
    with pytest.raises(InvalidParameterError):
        mechanism_from_dict({"kind": "exponential"})

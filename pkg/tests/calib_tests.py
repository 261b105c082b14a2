import math

import numpy as np
import pytest

from sharpcal.base.config import Config, get_config, set_config
from sharpcal.base.errors import (
    ArgumentError,
    InvariantViolationError,
    ParseError,
)
from sharpcal.calib import (
    CalibrationReport,
    Scenario,
    asymptotic_calibration_trend,
    calibration_residual,
    default_tolerance,
    finite_calibration_residual,
    histogram_frame,
    pit_histogram,
    sample_randomized_pit,
)
from sharpcal.dist import NormalDistribution, UniformDistribution
from sharpcal.scenarios import (
    block_generator,
    climatological_generator,
    make_climatological,
    make_compensated_pair,
    make_ideal,
    make_shifted_negative,
    random_normal_truths,
)


@pytest.fixture
def two_uniforms():
    return [UniformDistribution(0, 1), UniformDistribution(1, 2)]


@pytest.fixture
def restore_config():
    old = get_config()
    yield
    set_config(old)


def test_scenario_lists_every_violation():
    with pytest.raises(InvariantViolationError) as err:
        Scenario([UniformDistribution()], [UniformDistribution(), "x"], T=2)
    assert len(err.value.violations) == 2


def test_scenario_support_must_contain_forecasts():
    with pytest.raises(InvariantViolationError):
        Scenario([UniformDistribution(0, 2)], [UniformDistribution()],
                 support=(0, 1))


def test_scenario_spec_round_trip(two_uniforms):
    s = Scenario(two_uniforms, two_uniforms, support=(0, 2))
    again = Scenario.from_spec(s.to_spec())
    assert again.T == 2
    assert again.support == (0.0, 2.0)
    assert again.bounded


def test_scenario_from_spec_missing_keys():
    with pytest.raises(ParseError):
        Scenario.from_spec({"T": 1, "forecasts": []})


@pytest.mark.parametrize("support", [["lo", 1], [0, None], [True, 2],
                                     [0, float("inf")]])
def test_scenario_from_spec_bad_support(support):
    unit = {"type": "uniform", "a": 0, "b": 1}
    with pytest.raises(ParseError):
        Scenario.from_spec({"T": 1, "forecasts": [unit], "truths": [unit],
                            "support": support})


def test_ideal_is_exactly_calibrated(two_uniforms):
    report = finite_calibration_residual(make_ideal(two_uniforms))
    assert isinstance(report, CalibrationReport)
    assert report.max_abs_residual <= 1e-12
    assert report.calibrated
    assert report.tolerance == get_config().analytic_tol


def test_climatological_is_exactly_calibrated(two_uniforms):
    report = finite_calibration_residual(make_climatological(two_uniforms))
    assert report.max_abs_residual <= 1e-9
    assert report.calibrated


def test_shifted_normal_residual_at_median():
    s = make_shifted_negative([NormalDistribution(0, 1)], 0.5)
    assert calibration_residual(s, 0.5) == pytest.approx(0.191462, abs=1e-6)
    assert not finite_calibration_residual(s).calibrated


def test_residual_rejects_closed_probabilities(two_uniforms):
    with pytest.raises(ArgumentError):
        calibration_residual(make_ideal(two_uniforms), [0.0, 0.5])


def test_grid_size_at_least_two(two_uniforms):
    with pytest.raises(ArgumentError):
        finite_calibration_residual(make_ideal(two_uniforms), grid_size=1)


def test_compensated_pair_uses_tabulated_tolerance():
    s = make_compensated_pair(0.1, knots=256)
    assert s.tabulated
    assert default_tolerance(s) == get_config().tabulated_tol
    assert finite_calibration_residual(s).calibrated


def test_environment_overrides_default_tolerance(restore_config):
    set_config(Config.from_env({"SHARPCAL_DEFAULT_TOL": "1e-3"}))
    s = make_ideal([UniformDistribution()])
    assert default_tolerance(s) == 1e-3


def test_report_frame(two_uniforms):
    report = finite_calibration_residual(make_ideal(two_uniforms),
                                         grid_size=9)
    frame = report.to_frame()
    assert list(frame.columns) == ["p", "residual"]
    assert len(frame) == 9
    assert report.to_dict()["calibrated"] is True


def test_block_repeat_trend(two_uniforms):
    base = make_climatological(two_uniforms)
    trend = asymptotic_calibration_trend(block_generator(base), [2, 4, 8])
    assert trend.calibrated
    assert len(trend.rows) == 3


def test_climatological_generator_trend():
    trend = asymptotic_calibration_trend(climatological_generator, [1, 2, 4])
    assert trend.calibrated
    assert max(trend.max_abs_residuals) <= 1e-9


def test_shifted_generator_trend():
    unit = NormalDistribution(0, 1)

    def shifted(T):
        return make_shifted_negative([unit] * T, 0.3)

    for T in (1, 4, 16):
        assert calibration_residual(shifted(T), 0.5) \
            == pytest.approx(0.117911, abs=1e-6)

    trend = asymptotic_calibration_trend(shifted, [1, 4, 16])
    assert not trend.calibrated
    assert min(trend.max_abs_residuals) >= 0.117911
    np.testing.assert_allclose(trend.max_abs_residuals,
                               trend.max_abs_residuals[0], atol=1e-12)


def test_trend_rejects_unordered_checkpoints():
    with pytest.raises(ArgumentError):
        asymptotic_calibration_trend(climatological_generator, [4, 2])


def test_pit_is_deterministic(two_uniforms):
    s = make_ideal(two_uniforms)
    first = sample_randomized_pit(s, 1000, seed=3)
    second = sample_randomized_pit(s, 1000, seed=3)
    np.testing.assert_array_equal(first.values, second.values)
    assert first.ks_threshold == pytest.approx(1.358 / math.sqrt(1000))


def test_pit_requires_seed(two_uniforms):
    with pytest.raises(ArgumentError):
        sample_randomized_pit(make_ideal(two_uniforms), 10, seed=None)


def test_pit_histogram_conserves_draws(two_uniforms):
    sample = sample_randomized_pit(make_ideal(two_uniforms), 5000, seed=11)
    assert sum(pit_histogram(sample, 20)) == 5000
    frame = histogram_frame(sample, 20)
    assert list(frame.columns) == ["bin_lo", "bin_hi", "count"]
    assert frame["count"].sum() == 5000


def test_pit_rejects_shifted_negative():
    s = make_shifted_negative([NormalDistribution(0, 1)], 0.5)
    assert sample_randomized_pit(s, 10_000, seed=7).reject


@pytest.mark.slow
def test_calibration_battery():
    for seed in range(20):
        truths = random_normal_truths(1 + seed % 16, seed)
        for s in (make_ideal(truths), make_climatological(truths)):
            assert finite_calibration_residual(s).max_abs_residual <= 1e-9

    for c in (0.1, 0.5, 1.0):
        s = make_shifted_negative([NormalDistribution(0, 1)], c)
        oracle = NormalDistribution(0, 1).cdf(c) - 0.5
        assert calibration_residual(s, 0.5) == pytest.approx(oracle,
                                                             abs=1e-9)


@pytest.mark.slow
def test_pit_is_uniform_for_calibrated_scenarios():
    truths = random_normal_truths(4, 5)
    for s in (make_ideal(truths), make_climatological(truths)):
        sample = sample_randomized_pit(s, 100_000, seed=7)
        assert sample.ks_statistic < 2.0 / math.sqrt(sample.n)


@pytest.mark.slow
def test_pit_rejection_rates():
    ideal = make_ideal(random_normal_truths(4, 5))
    overdispersed = Scenario([NormalDistribution(0, 2)],
                             [NormalDistribution(0, 1)])

    ideal_rejects = sum(sample_randomized_pit(ideal, 100_000, seed).reject
                        for seed in range(100))
    wide_rejects = sum(
        sample_randomized_pit(overdispersed, 100_000, seed).reject
        for seed in range(100))
    assert ideal_rejects <= 10
    assert wide_rejects >= 99

import math

import numpy as np
import pytest

import sharpcal.probe

from sharpcal.base.errors import (
    ArgumentError,
    InfeasibleCompletionError,
    NotCalibratedError,
    SearchFailureError,
)
from sharpcal.calib import calibration_residual, finite_calibration_residual
from sharpcal.dist import NormalDistribution, UniformDistribution
from sharpcal.probe import (
    MIN_ORACLE_DRAWS,
    complete_calibration,
    equality_gap_scan,
    mc_oracle,
    minimize_sharpness,
    polynomial_basis,
    sine_basis,
    theta_expectation_mc,
)
from sharpcal.scenarios import (
    make_climatological,
    make_compensated_pair,
    make_ideal,
    make_shifted_negative,
    random_normal_truths,
)
from sharpcal.sharp import verify_sharpness


UNIT = UniformDistribution(0, 1)


@pytest.fixture
def climatological():
    return make_climatological([UniformDistribution(0, 1),
                                UniformDistribution(1, 2)])


def test_oracle_matches_index_decomposition(climatological):
    report = mc_oracle(climatological, 50_000, seed=1, u_bins=10)
    assert abs(report.var_H_mc - 1.0 / 3.0) <= 4 * report.var_H_se
    assert report.bin_counts.sum() == 50_000
    np.testing.assert_allclose(report.conditional_z_given_u.sum(axis=1), 1.0)


def test_oracle_frame(climatological):
    frame = mc_oracle(climatological, MIN_ORACLE_DRAWS, seed=2,
                      u_bins=4).to_frame()
    assert list(frame.columns) == ["u_bin", "bin_lo", "bin_hi", "count",
                                   "e_h", "e_h_se", "var_h", "p_z1", "p_z2"]
    assert len(frame) == 4


def test_oracle_is_deterministic(climatological):
    first = mc_oracle(climatological, MIN_ORACLE_DRAWS, seed=5)
    second = mc_oracle(climatological, MIN_ORACLE_DRAWS, seed=5)
    assert first.var_H_mc == second.var_H_mc


def test_oracle_preconditions(climatological):
    with pytest.raises(ArgumentError):
        mc_oracle(climatological, 100, seed=1)
    with pytest.raises(ArgumentError):
        mc_oracle(climatological, MIN_ORACLE_DRAWS, seed=None)
    with pytest.raises(NotCalibratedError):
        mc_oracle(make_shifted_negative([NormalDistribution(0, 1)], 1.0),
                  MIN_ORACLE_DRAWS, seed=1)


def test_theta_expectation():
    s = make_ideal([UNIT, UNIT])
    est = theta_expectation_mc(s, 20_000, seed=3)
    assert est.formula == pytest.approx(1.0 / 3.0)
    assert est.avg_var_G == pytest.approx(1.0 / 12.0)
    assert abs(est.estimate - est.formula) <= 4 * est.standard_error


def test_completion_of_ideal_forecast():
    s = complete_calibration([UNIT], [UNIT, UNIT], grid=64)
    assert finite_calibration_residual(s).calibrated
    np.testing.assert_allclose(s.forecasts[1].quantile([0.2, 0.7]),
                               [0.2, 0.7], atol=1e-12)


def test_completion_recovers_compensated_partner():
    eps = 0.1

    def first(p):
        return p + eps * np.sin(2 * math.pi * p)

    s = complete_calibration([first], [UNIT, UNIT], grid=512)
    p = 0.3
    assert s.forecasts[1].quantile(p) == pytest.approx(
        p - eps * math.sin(2 * math.pi * p), abs=1e-5)
    report = verify_sharpness(s)
    assert report.gap == pytest.approx(eps ** 2 / 2, abs=1e-5)


def test_completion_of_normal_truths_is_exact_at_knots():
    truths = [NormalDistribution(0, 1), NormalDistribution(1, 2)]
    s = complete_calibration([NormalDistribution(0.2, 1.1)], truths, grid=256)
    knots = np.arange(1, 257) / 257
    assert np.max(np.abs(calibration_residual(s, knots))) <= 1e-12
    assert finite_calibration_residual(s).max_abs_residual <= 1e-3


def test_completion_infeasible():
    with pytest.raises(InfeasibleCompletionError) as err:
        complete_calibration([UNIT], [UniformDistribution(0.5, 1.5), UNIT],
                             grid=9)
    assert 0 < err.value.p < 1


def test_completion_argument_errors():
    with pytest.raises(ArgumentError):
        complete_calibration([UNIT, UNIT], [UNIT, UNIT])
    with pytest.raises(ArgumentError):
        complete_calibration([], [UNIT])


def test_bases_vanish_at_ends():
    p = np.array([0.0, 1.0])
    for basis in (sine_basis, polynomial_basis):
        values, bounds = basis(p, 3)
        np.testing.assert_allclose(values, 0.0, atol=1e-12)
        assert bounds.shape == (3,)


def test_search_respects_inequality():
    result = minimize_sharpness([UNIT, UNIT], budget=8, seed=1, basis_size=2,
                                knots=64)
    assert result.feasible == 8
    assert result.min_gap >= -1e-9
    assert result.best_avg_var_F >= 1.0 / 12.0 - 1e-9
    assert result.avg_var_G == pytest.approx(1.0 / 12.0)
    assert result.best_coefficients.shape == (1, 2)
    assert result.all_candidates_calibrated


def test_search_is_deterministic():
    kwargs = dict(budget=4, seed=9, basis_size=2, basis="polynomial",
                  knots=32)
    first = minimize_sharpness([UNIT, UNIT, UNIT], **kwargs)
    second = minimize_sharpness([UNIT, UNIT, UNIT], **kwargs)
    assert first.candidate_avg_var_F == second.candidate_avg_var_F
    assert first.best_index == second.best_index


def test_search_argument_errors():
    with pytest.raises(ArgumentError):
        minimize_sharpness([UNIT], budget=4, seed=1)
    with pytest.raises(ArgumentError):
        minimize_sharpness([UNIT, UNIT], budget=4, seed=1, basis="wavelet")
    with pytest.raises(ArgumentError):
        minimize_sharpness([UNIT, UNIT], budget=0, seed=1)


def test_search_failure(monkeypatch):
    def infeasible(truths, knots, basis, basis_size, seed_seq):
        return False, None, None, None, None, "InfeasibleCompletionError"

    monkeypatch.setattr(sharpcal.probe, "_evaluate_candidate", infeasible)
    with pytest.raises(SearchFailureError) as err:
        minimize_sharpness([UNIT, UNIT], budget=3, seed=1)
    assert err.value.diagnostics["skipped"] == {
        "InfeasibleCompletionError": 3}


def test_equality_gap_scan():
    scenarios = {
        "ideal": make_ideal([UNIT, UniformDistribution(1, 2)]),
        "clim_unequal": make_climatological([UNIT,
                                             UniformDistribution(1, 2)]),
        "clim_equal": make_climatological([NormalDistribution(0, 1),
                                           NormalDistribution(0, 2)]),
        "comp_005": make_compensated_pair(0.05),
        "comp_010": make_compensated_pair(0.1),
    }
    table = equality_gap_scan(scenarios)
    assert list(table["scenario_id"]) == list(scenarios)
    np.testing.assert_allclose(table["gap"],
                               [0.0, 0.25, 0.0, 0.00125, 0.005], atol=1e-4)
    assert list(table["equality_condition_met"]) == [True, False, True, True,
                                                     True]
    assert list(table["tension"]) == [False, False, False, True, True]


def test_equality_gap_scan_accepts_lists():
    table = equality_gap_scan([make_ideal([UNIT])])
    assert list(table["scenario_id"]) == ["0"]


@pytest.mark.slow
def test_oracle_battery_on_compensated_pair():
    s = make_compensated_pair(0.1)
    formula = verify_sharpness(s).var_H_u_formula
    deviating = 0
    for seed in range(5):
        report = mc_oracle(s, 1_000_000, seed=seed)
        assert abs(report.var_H_mc - 1.0 / 12.0) <= 4 * report.var_H_se
        assert abs(formula - report.var_H_mc - 0.005) \
            <= 4 * report.var_H_se + 1e-5
        z = np.abs(report.conditional_z_given_u[:, 0] - 0.5) \
            / report.conditional_se[:, 0]
        deviating = max(deviating, int(np.sum(z[1:-1] > 3)))
    assert deviating >= 5


@pytest.mark.slow
def test_parallel_search_matches_serial():
    kwargs = dict(budget=6, seed=4, basis_size=2, knots=64)
    serial = minimize_sharpness([UNIT, UNIT], **kwargs)
    parallel = minimize_sharpness([UNIT, UNIT], parallel=True, **kwargs)
    assert serial.candidate_avg_var_F == parallel.candidate_avg_var_F


@pytest.mark.slow
@pytest.mark.parametrize("T", [2, 4])
def test_search_battery_over_uniform_truths(T):
    for seed in range(5):
        result = minimize_sharpness([UNIT] * T, budget=500, seed=seed,
                                    knots=128)
        assert result.min_gap >= -1e-6
        assert result.margin_vs_avg_var_G >= -1e-6
        assert result.margin_vs_avg_var_G <= 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("T", [2, 4])
def test_search_battery_over_normal_truths(T):
    for seed in range(2):
        truths = random_normal_truths(T, seed)
        result = minimize_sharpness(truths, budget=500, seed=seed, knots=128)
        assert result.min_gap >= -1e-6
        assert result.margin_vs_avg_var_G >= -1e-6
        assert result.avg_var_G == pytest.approx(
            np.mean([g.sigma ** 2 for g in truths]))

import numpy as np
import pytest

from sharpcal.base.errors import (
    ArgumentError,
    HypothesisError,
    NotCalibratedError,
)
from sharpcal.calib import calibration_residual
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
from sharpcal.sharp import (
    asymptotic_check,
    h_eval,
    recenter,
    theta_profile,
    u_decomposition,
    verify_sharpness,
    z_decomposition,
)


@pytest.fixture
def climatological():
    return make_climatological([UniformDistribution(0, 1),
                                UniformDistribution(1, 2)])


def test_z_decomposition_identity(climatological):
    z = z_decomposition(climatological)
    assert z.avg_var_G == pytest.approx(1.0 / 12.0)
    assert z.mu_dispersion == pytest.approx(0.25)
    assert z.var_H_z == pytest.approx(1.0 / 3.0)
    assert not z.truth_means_equal


def test_u_decomposition_identity(climatological):
    u = u_decomposition(climatological)
    assert u.avg_var_F == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert u.alpha_dispersion == pytest.approx(0.0, abs=1e-15)
    assert u.var_H_u_formula == pytest.approx(u.avg_var_F
                                              + u.alpha_dispersion, abs=1e-10)


def test_climatological_gap(climatological):
    report = verify_sharpness(climatological)
    assert report.gap == pytest.approx(0.25, abs=1e-9)
    assert not report.equality_condition_met
    np.testing.assert_allclose(report.mean_shifts, [-0.5, 0.5], atol=1e-12)
    assert report.inequality_holds
    assert report.mu_bar == pytest.approx(1.0)
    assert report.to_dict()["gap"] == pytest.approx(0.25, abs=1e-9)


def test_ideal_has_zero_gap():
    report = verify_sharpness(make_ideal([NormalDistribution(0, 1),
                                          NormalDistribution(3, 2)]))
    assert report.gap == pytest.approx(0.0, abs=1e-12)
    assert report.equality_condition_met
    assert report.notes == []


def test_compensated_pair_gap_and_tension():
    report = verify_sharpness(make_compensated_pair(0.1))
    assert report.gap == pytest.approx(0.005, abs=1e-5)
    assert report.equality_condition_met
    assert report.var_H_z == pytest.approx(1.0 / 12.0, abs=1e-12)
    assert any("mean shifts agree" in note for note in report.notes)


def test_climatological_with_equal_means():
    report = verify_sharpness(make_climatological(
        [NormalDistribution(0, 1), NormalDistribution(0, 2)]))
    assert report.gap == pytest.approx(0.0, abs=1e-9)
    assert report.equality_condition_met


def test_uncalibrated_scenario_is_refused():
    s = make_shifted_negative([NormalDistribution(0, 1)], 0.5)
    with pytest.raises(NotCalibratedError) as err:
        verify_sharpness(s)
    assert err.value.report.max_abs_residual > 0.19


def test_h_eval(climatological):
    assert h_eval(climatological, 1, 0.5) == pytest.approx(1.0)
    with pytest.raises(ArgumentError):
        h_eval(climatological, 0, 0.5)
    with pytest.raises(ArgumentError):
        h_eval(climatological, 1, 1.0)


def test_recenter_keeps_gap(climatological):
    centered = recenter(climatological)
    report = verify_sharpness(centered)
    assert report.alpha_bar == pytest.approx(0.0, abs=1e-12)
    assert report.gap == pytest.approx(0.25, abs=1e-9)


def test_recenter_shifts_support():
    base = make_ideal([UniformDistribution(0, 1), UniformDistribution(2, 3)])
    s = type(base)(base.forecasts, base.truths, support=(0, 3))
    assert recenter(s).support == pytest.approx((-2.5, 2.5))


def test_theta_profile_of_uniform():
    s = make_ideal([UniformDistribution(0, 1)])
    profile = theta_profile(s, u_grid_size=9)
    np.testing.assert_allclose(profile.theta, profile.u_grid ** 2)
    assert list(profile.to_frame().columns) == ["u", "theta"]


def test_theta_profile_needs_bounded_support():
    with pytest.raises(HypothesisError):
        theta_profile(make_ideal([NormalDistribution(0, 1)]))


def test_theta_reference_grid_must_match():
    s = make_ideal([UniformDistribution(0, 1)])
    with pytest.raises(ArgumentError):
        theta_profile(s, 9, reference=theta_profile(s, 19))


def test_block_repeat_asymptotics(climatological):
    report = asymptotic_check(block_generator(climatological), [2, 4, 8],
                              u_grid_size=64)
    assert report.inequality_holds
    assert report.theta_converged
    np.testing.assert_allclose(report.margins, 0.25, atol=1e-9)
    assert report.theta_deviations == pytest.approx([0.0, 0.0, 0.0],
                                                    abs=1e-12)
    assert list(report.to_frame().columns) == ["T", "avg_var_F", "avg_var_G",
                                               "margin", "theta_dev"]


def test_climatological_generator_margin_grows():
    report = asymptotic_check(climatological_generator, [2, 4, 8],
                              u_grid_size=64)
    expected = [(T * T - 1) / 12.0 for T in (2, 4, 8)]
    np.testing.assert_allclose(report.margins, expected, atol=1e-8)
    assert report.inequality_holds
    assert not report.theta_converged


@pytest.mark.slow
def test_decomposition_battery():
    for seed in range(20):
        truths = random_normal_truths(1 + seed % 16, seed)
        for s in (make_ideal(truths), make_climatological(truths)):
            z = z_decomposition(s)
            u = u_decomposition(s)
            assert z.var_H_z == pytest.approx(z.avg_var_G + z.mu_dispersion,
                                              abs=1e-10)
            assert u.var_H_u_formula == pytest.approx(
                u.avg_var_F + u.alpha_dispersion, abs=1e-10)
            assert verify_sharpness(s).gap >= -1e-9


@pytest.mark.slow
def test_recenter_battery():
    for seed in range(20):
        truths = random_normal_truths(1 + seed % 16, seed)
        s = make_ideal(truths) if seed % 2 else make_climatological(truths)
        centered = recenter(s)

        p = np.arange(1, 100) / 100
        np.testing.assert_allclose(calibration_residual(centered, p),
                                   calibration_residual(s, p), atol=1e-10)

        before, after = u_decomposition(s), u_decomposition(centered)
        assert after.avg_var_F == pytest.approx(before.avg_var_F, abs=1e-10)
        np.testing.assert_allclose(after.alpha, 0.0, atol=1e-9)
        assert z_decomposition(centered).avg_var_G \
            == pytest.approx(z_decomposition(s).avg_var_G, abs=1e-10)
        assert verify_sharpness(centered).gap \
            == pytest.approx(verify_sharpness(s).gap, abs=1e-10)


@pytest.mark.slow
def test_block_repeated_compensated_pair():
    eps = 0.1
    report = asymptotic_check(block_generator(make_compensated_pair(eps)),
                              [2, 8, 32, 128])
    assert report.inequality_holds
    assert report.theta_converged
    np.testing.assert_allclose(report.margins, eps ** 2 / 2, atol=1e-5)
    assert max(report.theta_deviations) <= 1e-12

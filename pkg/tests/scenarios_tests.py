import math

import pytest

from sharpcal.base.errors import (
    ArgumentError,
    HypothesisError,
    ParseError,
)
from sharpcal.calib import Scenario, finite_calibration_residual
from sharpcal.dist import (
    MixtureDistribution,
    NormalDistribution,
    UniformDistribution,
)
from sharpcal.scenarios import (
    FAMILIES,
    ScenarioSpec,
    build_scenario,
    climatological_generator,
    make_block_repeat,
    make_climatological,
    make_compensated_pair,
    make_ideal,
    make_shifted_negative,
    random_normal_truths,
)


UNIFORM_TRUTHS = [{"type": "uniform", "a": 0, "b": 1},
                  {"type": "uniform", "a": 1, "b": 2}]


def test_families():
    assert set(FAMILIES) == {"ideal", "climatological", "compensated_pair",
                             "shifted_negative", "block_repeat"}


def test_ideal_forecasts_are_truths():
    truths = random_normal_truths(3, 1)
    s = make_ideal(truths)
    assert s.forecasts == s.truths


def test_climatological_forecasts_one_mixture():
    s = make_climatological(random_normal_truths(3, 1))
    assert len({id(f) for f in s.forecasts}) == 1
    assert isinstance(s.forecasts[0], MixtureDistribution)


def test_compensated_pair_quantiles():
    s = make_compensated_pair(0.1, knots=99)
    p = s.forecasts[0].u[24]
    assert s.forecasts[0].quantile(p) \
        == pytest.approx(p + 0.1 * math.sin(2 * math.pi * p))
    assert s.forecasts[1].quantile(p) \
        == pytest.approx(p - 0.1 * math.sin(2 * math.pi * p))


@pytest.mark.parametrize("epsilon", [0.0, -0.1, 1 / (2 * math.pi), 0.5])
def test_compensated_pair_epsilon_range(epsilon):
    with pytest.raises(ArgumentError):
        make_compensated_pair(epsilon)


def test_shifted_negative_moves_forecasts_up():
    s = make_shifted_negative([NormalDistribution(0, 1)], 0.5)
    assert s.forecasts[0].mu == 0.5
    with pytest.raises(ArgumentError):
        make_shifted_negative([NormalDistribution(0, 1)], 0.0)


def test_block_repeat_cycles_pairs():
    base = make_ideal([UniformDistribution(0, 1), UniformDistribution(1, 2)])
    s = make_block_repeat(base, 6)
    assert s.T == 6
    assert s.forecasts[4] is base.forecasts[0]
    report = finite_calibration_residual(s)
    assert report.max_abs_residual == pytest.approx(
        finite_calibration_residual(base).max_abs_residual, abs=1e-15)


def test_block_repeat_errors():
    base = make_ideal([UniformDistribution(0, 1), UniformDistribution(1, 2)])
    with pytest.raises(ArgumentError):
        make_block_repeat(base, 5)
    with pytest.raises(HypothesisError):
        make_block_repeat(make_ideal([NormalDistribution(0, 1)]), 2)


def test_random_normal_truths_ranges_and_seed():
    truths = random_normal_truths(50, 9)
    assert all(-2 <= g.mu <= 2 and 0.5 <= g.sigma <= 2 for g in truths)
    again = random_normal_truths(50, 9)
    assert [g.mu for g in truths] == [g.mu for g in again]


def test_climatological_generator():
    s = climatological_generator(3)
    assert s.T == 3
    assert s.truths[2].a == 2.0
    assert s.forecasts[0].quantile(0.5) == pytest.approx(1.5)


def test_spec_round_trip():
    spec = ScenarioSpec.from_dict({"family": "compensated_pair",
                                   "epsilon": 0.1, "seed": 4})
    assert spec.params == {"epsilon": 0.1}
    assert spec.seed == 4
    assert ScenarioSpec.from_dict(spec.to_dict()) == spec


def test_unknown_family():
    with pytest.raises(ParseError):
        ScenarioSpec("optimistic")


def test_build_scenario_families():
    clim = build_scenario({"family": "climatological",
                           "truths": UNIFORM_TRUTHS})
    assert clim.forecasts[0].quantile(0.25) == pytest.approx(0.5)

    pair = build_scenario({"family": "compensated_pair", "epsilon": 0.05,
                           "knots": 128})
    assert pair.T == 2

    shifted = build_scenario({"family": "shifted_negative", "c": 0.5,
                              "truths": [{"type": "normal", "mu": 0,
                                          "sigma": 1}]})
    assert not finite_calibration_residual(shifted).calibrated

    seeded = build_scenario({"family": "ideal", "count": 4, "seed": 2})
    assert seeded.T == 4


def test_build_block_repeat_from_family_and_document():
    from_family = build_scenario({"family": "block_repeat", "T": 4,
                                  "base": {"family": "climatological",
                                           "truths": UNIFORM_TRUTHS}})
    assert from_family.T == 4

    doc = make_ideal([UniformDistribution()]).to_spec()
    from_doc = build_scenario({"family": "block_repeat", "T": 3, "base": doc})
    assert isinstance(from_doc, Scenario)
    assert from_doc.T == 3


def test_build_scenario_missing_parameters():
    with pytest.raises(ParseError):
        build_scenario({"family": "shifted_negative",
                        "truths": UNIFORM_TRUTHS})
    with pytest.raises(ParseError):
        build_scenario({"family": "ideal", "count": 3})


def test_every_calibrated_family_passes():
    truths = random_normal_truths(5, 3)
    for s in (make_ideal(truths), make_climatological(truths),
              make_compensated_pair(0.1, knots=512)):
        assert finite_calibration_residual(s).calibrated

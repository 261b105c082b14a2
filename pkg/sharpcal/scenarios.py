"""Scenario families

Each family covers one regime of the sharpness inequality: equality for the
ideal forecaster, strict inequality with unequal mean shifts for the
climatological forecaster, strict inequality with equal mean shifts for the
compensated pair, and a miscalibrated negative control. Block repetition turns
any bounded base into a generator whose averages do not depend on T.
"""

import logging
import math

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from sharpcal.base.config import get_config
from sharpcal.base.constants import (
    BLOCK_REPEAT,
    CLIMATOLOGICAL,
    COMPENSATED_PAIR,
    HORIZON,
    IDEAL,
    SHIFTED_NEGATIVE,
    TRUTHS,
)
from sharpcal.base.errors import (
    ArgumentError,
    HypothesisError,
    ParseError,
)
from sharpcal.calib import Scenario
from sharpcal.dist import (
    NormalDistribution,
    TabulatedQuantile,
    UniformDistribution,
    build_distribution,
    mixture_of,
    translate,
)
from sharpcal.util import process_count, process_seed, to_jsonable


logger = logging.getLogger(__name__)

FAMILIES = (IDEAL, CLIMATOLOGICAL, COMPENSATED_PAIR, SHIFTED_NEGATIVE,
            BLOCK_REPEAT)


@dataclass(frozen=True)
class ScenarioSpec:
    """Family name plus family-specific parameters.

    Attributes:
        family (str): one of FAMILIES.
        params (dict): epsilon and knots for compensated pairs, c for shifted
            negatives, base and T for block repeats, truths (or count) for
            the truth-based families.
        seed (int, None): seed for randomly drawn truths.
    """

    family: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParseError(f"unknown scenario family {self.family!r}, pick \
one of {list(FAMILIES)}")

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict) or "family" not in doc:
            raise ParseError("scenario spec must be an object with a family")
        params = {k: v for k, v in doc.items() if k not in ("family", "seed")}
        return cls(doc["family"], params, doc.get("seed"))

    def to_dict(self):
        doc = {"family": self.family, **self.params}
        if self.seed is not None:
            doc["seed"] = self.seed
        return to_jsonable(doc)


def _check_truths(truths):
    truths = list(truths)
    if not truths:
        raise ArgumentError("at least one truth distribution is needed")
    return truths


def make_ideal(truths):
    """Scenario whose forecasts are the truths"""
    truths = _check_truths(truths)
    return Scenario(truths, truths)


def make_climatological(truths):
    """Scenario forecasting the equal-weight mixture of the truths throughout"""
    truths = _check_truths(truths)
    climate = mixture_of(truths)
    return Scenario([climate] * len(truths), truths)


def _perturbed_uniform(knots, epsilon):
    return TabulatedQuantile(knots,
                             knots + epsilon * np.sin(2.0 * math.pi * knots))


def make_compensated_pair(epsilon, knots=None):
    """Two-period scenario that is calibrated without being ideal

    Both truths are Uni(0,1) and the forecast quantiles are p + e sin(2 pi p)
    and p - e sin(2 pi p), tabulated on k/(m+1). The perturbations cancel in
    the calibration average, both means stay at one half and the average
    forecast variance exceeds the truth variance by e^2/2.

    Raises:
        ArgumentError: if epsilon is outside (0, 1/(2 pi)).
    """
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0 / (2.0 * math.pi):
        raise ArgumentError(f"epsilon must lie in (0, 1/(2 pi)), got \
{epsilon}")

    m = process_count("knots", get_config().compensated_knots
                      if knots is None else knots, minimum=2)
    grid = np.arange(1, m + 1, dtype=float) / (m + 1)
    truth = UniformDistribution(0.0, 1.0)
    return Scenario([_perturbed_uniform(grid, epsilon),
                     _perturbed_uniform(grid, -epsilon)],
                    [truth, truth])


def make_shifted_negative(truths, c):
    """Miscalibrated control whose forecasts are the truths moved up by c

    Raises:
        ArgumentError: if c is zero, which is the ideal scenario.
    """
    truths = _check_truths(truths)
    c = float(c)
    if c == 0.0:
        raise ArgumentError("shift must be nonzero, use make_ideal for c=0")
    return Scenario([translate(g, -c) for g in truths], truths)


def make_block_repeat(base, T):
    """Repeat the pairs of a bounded base scenario cyclically up to T

    Raises:
        ArgumentError: if T is not a multiple of the base horizon.
        HypothesisError: if a base forecast has unbounded support.
    """
    T = process_count(HORIZON, T)
    if T % base.T:
        raise ArgumentError(f"T={T} is not a multiple of the base horizon \
{base.T}")
    if not base.bounded:
        raise HypothesisError("block repetition needs bounded forecast "
                              "supports")

    reps = T // base.T
    return Scenario(base.forecasts * reps, base.truths * reps,
                    support=base.support, T=T)


def block_generator(base):
    """Scenario generator repeating a base scenario"""
    def generate(T):
        return make_block_repeat(base, T)
    return generate


def random_normal_truths(count, seed):
    """Seeded normal truths with means in [-2, 2] and sigmas in [0.5, 2]"""
    count = process_count("count", count)
    rng = np.random.default_rng(process_seed(seed))
    mus = rng.uniform(-2.0, 2.0, size=count)
    sigmas = rng.uniform(0.5, 2.0, size=count)
    return [NormalDistribution(m, s) for m, s in zip(mus, sigmas)]


def climatological_generator(T):
    """Climatological scenario over truths Uni(t-1, t), t = 1..T"""
    T = process_count(HORIZON, T)
    return make_climatological([UniformDistribution(t - 1, t)
                                for t in range(1, T + 1)])


def _spec_truths(spec):
    params = spec.params
    if TRUTHS in params:
        if not isinstance(params[TRUTHS], list):
            raise ParseError("truths must be a list of distribution specs")
        return [build_distribution(d) for d in params[TRUTHS]]
    if "count" in params and spec.seed is not None:
        return random_normal_truths(params["count"], spec.seed)
    raise ParseError(f"{spec.family} spec needs truths or a count and a seed")


def _require(spec, key):
    if key not in spec.params:
        raise ParseError(f"{spec.family} spec is missing {key!r}")
    return spec.params[key]


def build_scenario(spec):
    """Build a scenario from a ScenarioSpec or its JSON object"""
    if isinstance(spec, dict):
        spec = ScenarioSpec.from_dict(spec)
    elif not isinstance(spec, ScenarioSpec):
        raise TypeError(f"spec must be of type {ScenarioSpec} or dict, not \
{type(spec)}")

    logger.debug("building %s scenario", spec.family)

    if spec.family == IDEAL:
        return make_ideal(_spec_truths(spec))
    if spec.family == CLIMATOLOGICAL:
        return make_climatological(_spec_truths(spec))
    if spec.family == COMPENSATED_PAIR:
        return make_compensated_pair(_require(spec, "epsilon"),
                                     spec.params.get("knots"))
    if spec.family == SHIFTED_NEGATIVE:
        return make_shifted_negative(_spec_truths(spec), _require(spec, "c"))

    base = _require(spec, "base")
    if isinstance(base, dict) and "family" in base:
        base = build_scenario(base)
    else:
        base = Scenario.from_spec(base)
    return make_block_repeat(base, _require(spec, HORIZON))

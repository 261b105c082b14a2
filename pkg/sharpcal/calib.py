"""Finite and asymptotic probabilistic calibration

A scenario pairs forecast laws F_1..F_T with truth laws G_1..G_T. It is
calibrated when the average of G_i(F_i^-1(p)) equals p for every p in (0,1);
the residual of that identity is evaluated on interior grids. The randomized
PIT draws a time index uniformly, a truth value from that index and evaluates
the forecast CDF at it, which is uniform exactly when the scenario is
calibrated.
"""

import logging
import math

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from scipy import stats

from sharpcal.base.config import get_config
from sharpcal.base.constants import (
    BIN_HI,
    BIN_LO,
    COUNT,
    FORECASTS,
    HORIZON,
    SUPPORT,
    TRUTHS,
)
from sharpcal.base.errors import (
    ArgumentError,
    InvariantViolationError,
    ParseError,
)
from sharpcal.dist import ContinuousDistribution, build_distribution
from sharpcal.util import (
    process_checkpoints,
    process_count,
    process_grid,
    process_seed,
    process_tol,
    to_jsonable,
)


logger = logging.getLogger(__name__)

_SUPPORT_SLACK = 1e-12


class Scenario:
    """Paired sequences of forecast and truth laws.

    Attributes:
        T (int): horizon.
        forecasts (tuple): forecast laws F_1..F_T.
        truths (tuple): truth laws G_1..G_T.
        support (tuple, None): optional bounds (a, b) containing every
            forecast support.
    """

    T: int
    forecasts: Tuple[ContinuousDistribution, ...]
    truths: Tuple[ContinuousDistribution, ...]
    support: Optional[Tuple[float, float]]

    def __init__(self, forecasts, truths, support=None, T=None):
        forecasts = tuple(forecasts)
        truths = tuple(truths)
        T = len(forecasts) if T is None else T

        violations = []
        if isinstance(T, bool) or not isinstance(T, (int, np.integer)) \
                or T < 1:
            violations.append(f"horizon must be a positive integer, not {T}")
        if len(forecasts) != T:
            violations.append(f"expected {T} forecasts, got {len(forecasts)}")
        if len(truths) != T:
            violations.append(f"expected {T} truths, got {len(truths)}")
        for name, seq in ((FORECASTS, forecasts), (TRUTHS, truths)):
            for i, d in enumerate(seq):
                if not isinstance(d, ContinuousDistribution):
                    violations.append(f"{name}[{i}] is of type \
{type(d).__name__}, not a distribution")

        if support is not None and not violations:
            a, b = (float(v) for v in support)
            if not a < b:
                violations.append(f"support bounds must satisfy a < b, got \
({a}, {b})")
            for i, d in enumerate(forecasts):
                if d.support_lo < a - _SUPPORT_SLACK \
                        or d.support_hi > b + _SUPPORT_SLACK:
                    violations.append(f"forecasts[{i}] support \
[{d.support_lo:.6g}, {d.support_hi:.6g}] is not inside [{a:g}, {b:g}]")
            support = (a, b)

        if violations:
            raise InvariantViolationError(violations)

        self.T = int(T)
        self.forecasts = forecasts
        self.truths = truths
        self.support = support

    @property
    def tabulated(self):
        """Whether any law is built from tabulated values"""
        return any(d.tabulated for d in self.forecasts + self.truths)

    @property
    def bounded(self):
        """Whether every forecast has bounded support"""
        return all(d.bounded for d in self.forecasts)

    def pairs(self):
        return zip(self.forecasts, self.truths)

    def to_spec(self):
        """Return the JSON scenario document"""
        doc = {
            HORIZON: self.T,
            FORECASTS: [d.to_spec() for d in self.forecasts],
            TRUTHS: [d.to_spec() for d in self.truths],
        }
        if self.support is not None:
            doc[SUPPORT] = list(self.support)
        return doc

    @classmethod
    def from_spec(cls, doc):
        """Build a scenario from its JSON document

        Raises:
            ParseError: if the document misses a key or is malformed.
            InvariantViolationError: if the parsed laws break an invariant.
        """
        if not isinstance(doc, dict):
            raise ParseError(f"scenario must be an object, not \
{type(doc).__name__}")
        missing = [key for key in (HORIZON, FORECASTS, TRUTHS)
                   if key not in doc]
        if missing:
            raise ParseError(f"scenario is missing {missing}")
        if not isinstance(doc[FORECASTS], list) \
                or not isinstance(doc[TRUTHS], list):
            raise ParseError("forecasts and truths must be lists")

        support = doc.get(SUPPORT)
        if support is not None and (not isinstance(support, list)
                                    or len(support) != 2):
            raise ParseError("support must be a list [a, b]")
        if support is not None and not all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                and math.isfinite(v) for v in support):
            raise ParseError(f"support bounds must be finite numbers, not \
{support}")

        return cls([build_distribution(d) for d in doc[FORECASTS]],
                   [build_distribution(d) for d in doc[TRUTHS]],
                   support=support,
                   T=doc[HORIZON])

    def __len__(self):
        return self.T

    def __repr__(self):
        return f"Scenario(T={self.T}, tabulated={self.tabulated})"


@dataclass(frozen=True)
class CalibrationReport:
    """Calibration residuals on a probability grid.

    Attributes:
        T (int): scenario horizon.
        p_grid (np.ndarray): interior probabilities.
        residuals (np.ndarray): r(p) at every grid point.
        max_abs_residual (float): largest |r(p)| over the grid.
        tolerance (float): tolerance the verdict was taken at.
        calibrated (bool): max_abs_residual <= tolerance.
    """

    T: int
    p_grid: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    max_abs_residual: float
    tolerance: float
    calibrated: bool

    def to_dict(self):
        return to_jsonable({
            HORIZON: self.T,
            "p_grid": self.p_grid,
            "residuals": self.residuals,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "calibrated": self.calibrated,
        })

    def to_frame(self):
        return pd.DataFrame({"p": self.p_grid, "residual": self.residuals})


@dataclass(frozen=True)
class CalibrationTrend:
    """Calibration residual trajectory over growing horizons.

    Attributes:
        checkpoints (list): horizons evaluated, strictly increasing.
        max_abs_residuals (list): max |r(p)| at every checkpoint.
        tolerance (float): tolerance of the final verdict.
        slack (float): relative growth allowed between checkpoints.
        calibrated (bool): residuals nonincreasing within slack and final
            residual within tolerance.
    """

    checkpoints: List[int]
    max_abs_residuals: List[float]
    tolerance: float
    slack: float
    calibrated: bool

    @property
    def rows(self):
        return list(zip(self.checkpoints, self.max_abs_residuals))

    def to_dict(self):
        return to_jsonable({
            "checkpoints": self.checkpoints,
            "max_abs_residuals": self.max_abs_residuals,
            "tolerance": self.tolerance,
            "slack": self.slack,
            "calibrated": self.calibrated,
        })

    def to_frame(self):
        return pd.DataFrame({HORIZON: self.checkpoints,
                             "max_abs_residual": self.max_abs_residuals})


@dataclass(frozen=True)
class PitSample:
    """Seeded draws of the randomized PIT with uniformity statistics.

    Attributes:
        n (int): sample count.
        seed (int): seed of the generator stream.
        values (np.ndarray): PIT values.
        ks_statistic (float): Kolmogorov-Smirnov distance to Uni(0,1).
        ks_threshold (float): rejection threshold ks_constant / sqrt(n).
        reject (bool): ks_statistic > ks_threshold.
        p_value (float): KS p-value against Uni(0,1).
    """

    n: int
    seed: int
    values: np.ndarray = field(repr=False)
    ks_statistic: float
    ks_threshold: float
    reject: bool
    p_value: float

    def to_dict(self):
        return to_jsonable({
            "n": self.n,
            "seed": self.seed,
            "values": self.values,
            "ks_statistic": self.ks_statistic,
            "ks_threshold": self.ks_threshold,
            "reject": self.reject,
            "p_value": self.p_value,
        })


def default_tolerance(s, config=None):
    """Calibration tolerance for a scenario

    Analytic scenarios use the tight tolerance and anything built from
    tabulated values uses the loose one.
    """
    conf = get_config() if config is None else config
    return conf.tabulated_tol if s.tabulated else conf.analytic_tol


def calibration_residual(s, p):
    """Evaluate r(p) = (1/T) sum G_i(F_i^-1(p)) - p

    Args:
        s (Scenario): scenario to evaluate.
        p (float, array-like): probabilities in (0,1).
    """
    pa = np.asarray(p, dtype=float)
    if np.any(pa <= 0.0) or np.any(pa >= 1.0):
        raise ArgumentError("probabilities must lie strictly inside (0,1)")

    total = np.zeros_like(pa)
    for f, g in s.pairs():
        total = total + g.cdf(f.quantile(pa))
    out = total / s.T - pa
    return float(out) if np.ndim(p) == 0 else out


def finite_calibration_residual(s, grid_size=None, tol=None):
    """Evaluate the finite calibration residual on an interior grid

    Args:
        s (Scenario): scenario to check.
        grid_size (int): number of grid points k/(n+1). Defaults to the
            configured p_grid_size.
        tol (float): calibration tolerance. Defaults to default_tolerance(s).

    Returns:
        CalibrationReport.
    """
    conf = get_config()
    grid = process_grid(conf.p_grid_size if grid_size is None else grid_size)
    tol = process_tol(tol, default_tolerance(s, conf))

    residuals = calibration_residual(s, grid)
    max_abs = float(np.max(np.abs(residuals)))
    if not math.isfinite(max_abs):
        raise InvariantViolationError(
            "calibration residual is not finite on the grid")

    logger.debug("T=%d max |r(p)| = %.3e (tol %.1e)", s.T, max_abs, tol)
    return CalibrationReport(T=s.T,
                             p_grid=grid,
                             residuals=residuals,
                             max_abs_residual=max_abs,
                             tolerance=tol,
                             calibrated=max_abs <= tol)


def asymptotic_calibration_trend(scenario_generator: Callable[[int], Scenario],
                                 checkpoints: Sequence[int],
                                 grid_size=None,
                                 tol=None,
                                 slack=None):
    """Track the calibration residual along growing horizons

    Args:
        scenario_generator (callable): maps a horizon T to a Scenario.
        checkpoints (list): strictly increasing horizons.
        grid_size (int): probability grid size of every check.
        tol (float): final tolerance. Defaults to the last scenario's.
        slack (float): relative growth allowed between consecutive
            checkpoints. Defaults to the configured trend_slack.

    Returns:
        CalibrationTrend.
    """
    checkpoints = process_checkpoints(checkpoints)
    slack = get_config().trend_slack if slack is None else float(slack)

    residuals = []
    for T in checkpoints:
        scenario = scenario_generator(T)
        if scenario.T != T:
            raise ArgumentError(f"generator returned horizon {scenario.T} \
for checkpoint {T}")
        report = finite_calibration_residual(scenario, grid_size, tol)
        residuals.append(report.max_abs_residual)
        logger.info("checkpoint T=%d: max |r(p)| = %.3e", T,
                    report.max_abs_residual)

    final_tol = report.tolerance
    trending = all(b <= (1.0 + slack) * a + final_tol
                   for a, b in zip(residuals, residuals[1:]))

    return CalibrationTrend(checkpoints=checkpoints,
                            max_abs_residuals=residuals,
                            tolerance=final_tol,
                            slack=slack,
                            calibrated=trending and residuals[-1] <= final_tol)


def draw_pit(s, rng, n):
    """Draw (index, truth value, PIT value) triples"""
    index = rng.integers(s.T, size=n)
    v = rng.random(n)
    x = np.empty(n)
    u = np.empty(n)
    for i, (f, g) in enumerate(s.pairs()):
        mask = index == i
        if np.any(mask):
            x[mask] = g.quantile(v[mask])
            u[mask] = f.cdf(x[mask])
    return index, x, u


def sample_randomized_pit(s, n, seed, ks_constant=None):
    """Sample the randomized PIT U(T)

    Every draw picks a time index uniformly, draws a truth value by inverse
    transform and evaluates that index's forecast CDF at it. The draws are a
    deterministic function of (s, n, seed).

    Args:
        s (Scenario): scenario to sample.
        n (int): number of draws.
        seed (int): seed of a fresh PCG64 stream.
        ks_constant (float): KS rejection constant. Defaults to the
            configured ks_constant.

    Returns:
        PitSample.
    """
    n = process_count("n", n)
    seed = process_seed(seed)
    ks_constant = get_config().ks_constant if ks_constant is None \
        else float(ks_constant)

    rng = np.random.default_rng(seed)
    _, _, values = draw_pit(s, rng, n)

    ks = stats.kstest(values, "uniform")
    threshold = ks_constant / math.sqrt(n)
    logger.debug("PIT n=%d seed=%d KS=%.4g threshold=%.4g", n, seed,
                 ks.statistic, threshold)

    values.setflags(write=False)
    return PitSample(n=n,
                     seed=seed,
                     values=values,
                     ks_statistic=float(ks.statistic),
                     ks_threshold=threshold,
                     reject=bool(ks.statistic > threshold),
                     p_value=float(ks.pvalue))


def pit_histogram(sample, bins):
    """Counts of PIT values over equal-width bins of (0,1)"""
    bins = process_count("bins", bins)
    counts, _ = np.histogram(sample.values, bins=bins, range=(0.0, 1.0))
    return [int(c) for c in counts]


def histogram_frame(sample, bins):
    """Histogram table with bin_lo, bin_hi and count columns"""
    counts = pit_histogram(sample, bins)
    edges = np.linspace(0.0, 1.0, len(counts) + 1)
    return pd.DataFrame({BIN_LO: edges[:-1], BIN_HI: edges[1:],
                         COUNT: counts})

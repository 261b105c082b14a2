"""Monte-Carlo oracle and the calibration-constrained sharpness search

The oracle samples the randomized construction behind the variance
decompositions and estimates Var(H) together with the conditional law of the
index given the PIT value. The search draws random perturbations of the ideal
forecasts for the first T-1 periods, completes the last period so that the
scenario is exactly calibrated and keeps the sharpest candidate.
"""

import concurrent.futures
import logging
import math

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from sharpcal.base.config import get_config
from sharpcal.base.constants import (
    BIN_HI,
    BIN_LO,
    COUNT,
    GAP,
    SCENARIO_ID,
    U_BIN,
)
from sharpcal.base.errors import (
    ArgumentError,
    InfeasibleCompletionError,
    InvariantViolationError,
    NotCalibratedError,
    SearchFailureError,
)
from sharpcal.calib import Scenario, draw_pit, finite_calibration_residual
from sharpcal.dist import (
    ContinuousDistribution,
    TabulatedQuantile,
    WarpedDistribution,
    moments,
)
from sharpcal.sharp import u_decomposition, verify_sharpness, z_decomposition
from sharpcal.util import process_count, process_seed, to_jsonable


logger = logging.getLogger(__name__)

MIN_ORACLE_DRAWS = 10_000


@dataclass(frozen=True)
class McOracleReport:
    """Monte-Carlo estimates for the randomized construction.

    Attributes:
        n (int): number of draws.
        seed (int): seed of the generator stream.
        T (int): scenario horizon.
        var_H_mc (float): sample variance of H.
        var_H_se (float): standard error of var_H_mc.
        bin_edges (np.ndarray): edges of the equal-width PIT bins.
        bin_counts (np.ndarray): draws per PIT bin.
        conditional_z_given_u (np.ndarray): frequency of every index within
            every PIT bin, shape (u_bins, T).
        conditional_se (np.ndarray): binomial standard errors of those
            frequencies.
        e_h_given_u (np.ndarray): mean of H per PIT bin.
        e_h_se (np.ndarray): standard error of e_h_given_u.
        var_h_given_u (np.ndarray): variance of H per PIT bin.
    """

    n: int
    seed: int
    T: int
    var_H_mc: float
    var_H_se: float
    bin_edges: np.ndarray = field(repr=False)
    bin_counts: np.ndarray = field(repr=False)
    conditional_z_given_u: np.ndarray = field(repr=False)
    conditional_se: np.ndarray = field(repr=False)
    e_h_given_u: np.ndarray = field(repr=False)
    e_h_se: np.ndarray = field(repr=False)
    var_h_given_u: np.ndarray = field(repr=False)

    def to_dict(self):
        return to_jsonable({
            "n": self.n,
            "seed": self.seed,
            "T": self.T,
            "var_H_mc": self.var_H_mc,
            "var_H_se": self.var_H_se,
            "bin_edges": self.bin_edges,
            "bin_counts": self.bin_counts,
            "conditional_z_given_u": self.conditional_z_given_u,
            "conditional_se": self.conditional_se,
            "e_h_given_u": self.e_h_given_u,
            "e_h_se": self.e_h_se,
            "var_h_given_u": self.var_h_given_u,
        })

    def to_frame(self):
        """Conditional table, one row per PIT bin"""
        frame = pd.DataFrame({
            U_BIN: np.arange(self.bin_counts.size),
            BIN_LO: self.bin_edges[:-1],
            BIN_HI: self.bin_edges[1:],
            COUNT: self.bin_counts,
            "e_h": self.e_h_given_u,
            "e_h_se": self.e_h_se,
            "var_h": self.var_h_given_u,
        })
        for i in range(self.T):
            frame[f"p_z{i + 1}"] = self.conditional_z_given_u[:, i]
        return frame


@dataclass(frozen=True)
class ThetaExpectation:
    """Monte-Carlo mean of theta_T at the randomized PIT.

    Attributes:
        n (int): number of draws.
        seed (int): seed of the generator stream.
        estimate (float): sample mean of (1/T) sum F_i^-1(U)^2.
        standard_error (float): standard error of the estimate.
        formula (float): (1/T) sum of forecast second moments.
        avg_var_G (float): average truth variance.
    """

    n: int
    seed: int
    estimate: float
    standard_error: float
    formula: float
    avg_var_G: float

    def to_dict(self):
        return to_jsonable(self.__dict__)


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of the sharpness search.

    Attributes:
        budget (int): candidates drawn.
        seed (int): seed of the search.
        basis (str): perturbation basis name.
        basis_size (int): number of basis functions.
        feasible (int): candidates completed and calibrated.
        infeasible (int): candidates skipped.
        best_avg_var_F (float): smallest average forecast variance found.
        best_index (int): candidate index of the best scenario.
        best_coefficients (np.ndarray): coefficients of the best candidate,
            shape (T-1, basis_size).
        best_scenario (Scenario): sharpest calibrated candidate.
        avg_var_G (float): average truth variance.
        margin_vs_avg_var_G (float): best_avg_var_F - avg_var_G.
        min_gap (float): smallest gap over all feasible candidates.
        all_candidates_calibrated (bool): every recorded candidate passed the
            calibration check.
        candidate_avg_var_F (list): average forecast variance of every
            feasible candidate, in candidate order.
    """

    budget: int
    seed: int
    basis: str
    basis_size: int
    feasible: int
    infeasible: int
    best_avg_var_F: float
    best_index: int
    best_coefficients: np.ndarray = field(repr=False)
    best_scenario: Scenario = field(repr=False)
    avg_var_G: float
    margin_vs_avg_var_G: float
    min_gap: float
    all_candidates_calibrated: bool
    candidate_avg_var_F: List[float] = field(default_factory=list, repr=False)

    def to_dict(self):
        return to_jsonable({
            "budget": self.budget,
            "seed": self.seed,
            "basis": self.basis,
            "basis_size": self.basis_size,
            "feasible": self.feasible,
            "infeasible": self.infeasible,
            "best_avg_var_F": self.best_avg_var_F,
            "best_index": self.best_index,
            "best_coefficients": self.best_coefficients,
            "avg_var_G": self.avg_var_G,
            "margin_vs_avg_var_G": self.margin_vs_avg_var_G,
            "min_gap": self.min_gap,
            "all_candidates_calibrated": self.all_candidates_calibrated,
            "candidate_avg_var_F": self.candidate_avg_var_F,
            "best_scenario": self.best_scenario.to_spec(),
        })


def _require_calibrated(s):
    report = finite_calibration_residual(s)
    if not report.calibrated:
        raise NotCalibratedError(report)


def _bin_index(u, bins):
    return np.minimum((u * bins).astype(int), bins - 1)


def mc_oracle(s, n, seed, u_bins=None):
    """Sample (index, H, U) and estimate Var(H) and its PIT conditionals

    Args:
        s (Scenario): calibrated scenario.
        n (int): number of draws, at least MIN_ORACLE_DRAWS.
        seed (int): seed of a fresh PCG64 stream.
        u_bins (int): number of equal-width PIT bins. Defaults to the
            configured u_bins.

    Returns:
        McOracleReport.
    """
    n = process_count("n", n, minimum=MIN_ORACLE_DRAWS)
    seed = process_seed(seed)
    bins = process_count("u_bins", get_config().u_bins if u_bins is None
                         else u_bins)
    _require_calibrated(s)

    rng = np.random.default_rng(seed)
    index, h, u = draw_pit(s, rng, n)

    var_h = float(np.var(h, ddof=1))
    m4 = float(np.mean((h - h.mean()) ** 4))
    var_se = math.sqrt(max(m4 - var_h ** 2, 0.0) / n)

    b = _bin_index(u, bins)
    counts = np.bincount(b, minlength=bins)
    joint = np.bincount(b * s.T + index, minlength=bins * s.T)\
        .reshape(bins, s.T)

    with np.errstate(invalid="ignore", divide="ignore"):
        freq = joint / counts[:, None]
        freq_se = np.sqrt(freq * (1.0 - freq) / counts[:, None])
        sums = np.bincount(b, weights=h, minlength=bins)
        e_h = sums / counts
        sq = np.bincount(b, weights=(h - e_h[b]) ** 2, minlength=bins)
        var_bin = sq / np.maximum(counts - 1, 1)
        e_se = np.sqrt(var_bin / counts)

    empty = int(np.sum(counts == 0))
    if empty:
        logger.warning("%d of %d PIT bins received no draws", empty, bins)
    logger.debug("oracle n=%d seed=%d Var(H)=%.6g +- %.2g", n, seed, var_h,
                 var_se)

    return McOracleReport(n=n,
                          seed=seed,
                          T=s.T,
                          var_H_mc=var_h,
                          var_H_se=var_se,
                          bin_edges=np.linspace(0.0, 1.0, bins + 1),
                          bin_counts=counts,
                          conditional_z_given_u=freq,
                          conditional_se=freq_se,
                          e_h_given_u=e_h,
                          e_h_se=e_se,
                          var_h_given_u=var_bin)


def theta_expectation_mc(s, n, seed, nodes=None):
    """Estimate E[(1/T) sum F_i^-1(U)^2] at the randomized PIT U

    Under calibration U is uniform, so the estimate should match the average
    forecast second moment.
    """
    n = process_count("n", n)
    seed = process_seed(seed)

    rng = np.random.default_rng(seed)
    _, _, u = draw_pit(s, rng, n)
    theta = np.zeros(n)
    for f in s.forecasts:
        theta = theta + f.quantile(u) ** 2
    theta = theta / s.T

    formula = u_decomposition(s, nodes)
    second = float(np.mean(formula.alpha ** 2)) + formula.avg_var_F
    return ThetaExpectation(n=n,
                            seed=seed,
                            estimate=float(theta.mean()),
                            standard_error=float(theta.std(ddof=1)
                                                 / math.sqrt(n)) if n > 1
                            else math.inf,
                            formula=second,
                            avg_var_G=z_decomposition(s, nodes).avg_var_G)


def _process_knots(grid):
    if grid is None:
        grid = get_config().compensated_knots
    if isinstance(grid, (int, np.integer)) and not isinstance(grid, bool):
        m = process_count("grid", grid, minimum=2)
        return np.arange(1, m + 1, dtype=float) / (m + 1)

    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0) \
            or grid[0] <= 0.0 or grid[-1] >= 1.0:
        raise ArgumentError("grid must be strictly increasing inside (0,1)")
    return grid


def _as_forecast(partial, grid):
    if isinstance(partial, ContinuousDistribution):
        return partial
    if callable(partial):
        return TabulatedQuantile.from_function(partial, grid)
    raise TypeError(f"partial quantiles must be distributions or callables, \
not {type(partial)}")


def complete_calibration(partial_quantiles, truths, grid=None):
    """Solve the calibration identity for the last forecast

    The last forecast is the last truth warped in probability by
    w(p) = T p - sum_{i<T} G_i(F_i^-1(p)), tabulated on the grid, so that
    G_T(F_T^-1(p)) = w(p) at every knot.

    Args:
        partial_quantiles (list): T-1 forecasts, each a distribution or a
            strictly increasing quantile callable tabulated on the grid.
        truths (list): T truth distributions.
        grid (int, array-like): knot count or interior knots. Defaults to
            the configured compensated_knots.

    Returns:
        Calibrated Scenario.

    Raises:
        InfeasibleCompletionError: with the offending p, if the warp leaves
            (0,1) or is not strictly increasing.
    """
    truths = list(truths)
    partial_quantiles = list(partial_quantiles)
    T = len(truths)
    if T < 2:
        raise ArgumentError("calibration completion needs T >= 2")
    if len(partial_quantiles) != T - 1:
        raise ArgumentError(f"expected {T - 1} partial quantiles, got \
{len(partial_quantiles)}")

    grid = _process_knots(grid)
    forecasts = [_as_forecast(q, grid) for q in partial_quantiles]

    warp = T * grid
    lo, hi = 0.0, float(T)
    for f, g in zip(forecasts, truths):
        warp = warp - g.cdf(f.quantile(grid))
        lo -= g.cdf(f.support_lo)
        hi -= g.cdf(f.support_hi)

    outside = np.flatnonzero((warp <= 0.0) | (warp >= 1.0))
    if outside.size:
        k = outside[0]
        raise InfeasibleCompletionError(
            grid[k], f"inner argument {warp[k]:.6g} leaves (0,1)")

    knots = np.concatenate(([0.0], grid, [1.0]))
    values = np.concatenate(([min(max(lo, 0.0), 1.0)], warp,
                             [min(max(hi, 0.0), 1.0)]))
    min_slope = get_config().min_slope
    flat = np.flatnonzero(np.diff(values) < min_slope * np.diff(knots))
    if flat.size:
        k = flat[0]
        raise InfeasibleCompletionError(
            knots[k + 1], "completed quantile is not strictly increasing")

    last = WarpedDistribution(truths[-1], knots, values, min_slope=min_slope)
    return Scenario(forecasts + [last], truths)


def sine_basis(p, k):
    """sin(2 pi j p) for j = 1..k, with monotonicity-keeping bounds"""
    j = np.arange(1, k + 1)[:, None]
    return np.sin(2.0 * math.pi * j * p), 1.0 / (4.0 * math.pi * j[:, 0])


def polynomial_basis(p, k):
    """p^j (1 - p) for j = 1..k, with monotonicity-keeping bounds"""
    j = np.arange(1, k + 1)[:, None]
    return p ** j * (1.0 - p), 1.0 / (4.0 * (j[:, 0] + 1.0))


BASES = {
    "sine": sine_basis,
    "polynomial": polynomial_basis,
}


def _evaluate_candidate(truths, knots, basis, basis_size, seed_seq):
    """Draw and score one candidate.

    Returns:
        (feasible, avg_var_F, gap, coefficients, scenario, reason)
    """
    rng = np.random.default_rng(seed_seq)
    values, bounds = BASES[basis](knots, basis_size)
    coefs = rng.uniform(-1.0, 1.0, size=(len(truths) - 1, basis_size)) \
        * bounds

    warps = knots + coefs @ values
    # every basis function vanishes at both ends
    warps[:, 0], warps[:, -1] = 0.0, 1.0

    try:
        partials = [WarpedDistribution(g, knots, w)
                    for g, w in zip(truths[:-1], warps)]
        scenario = complete_calibration(partials, truths, grid=knots[1:-1])
        report = finite_calibration_residual(scenario)
        if not report.calibrated:
            return False, None, None, coefs, None, "not calibrated"
        z = z_decomposition(scenario)
        u = u_decomposition(scenario)
    except (InfeasibleCompletionError, InvariantViolationError) as exc:
        return False, None, None, coefs, None, type(exc).__name__

    return True, u.avg_var_F, u.avg_var_F - z.avg_var_G, coefs, scenario, None


def minimize_sharpness(truths, budget, seed, basis_size=None, basis="sine",
                       knots=None, parallel=False):
    """Random search for the sharpest calibrated forecaster

    Args:
        truths (list): T >= 2 truth distributions.
        budget (int): number of candidates to draw.
        seed (int): seed of the search; candidate c uses the c-th child of
            SeedSequence(seed), so serial and parallel runs agree.
        basis_size (int): number of perturbation functions. Defaults to the
            configured basis_size.
        basis (str): "sine" or "polynomial".
        knots (int): interior warp knots. Defaults to the configured
            p_grid_size.
        parallel (bool): evaluate candidates in a process pool.

    Returns:
        ProbeResult.

    Raises:
        SearchFailureError: if no candidate is feasible.
    """
    conf = get_config()
    truths = list(truths)
    budget = process_count("budget", budget)
    seed = process_seed(seed)
    basis_size = process_count("basis size", conf.basis_size
                               if basis_size is None else basis_size)
    if len(truths) < 2:
        raise ArgumentError("the sharpness search needs T >= 2")
    if basis not in BASES:
        raise ArgumentError(f"unknown basis {basis!r}, pick one of \
{sorted(BASES)}")

    m = process_count("knots", conf.p_grid_size if knots is None else knots,
                      minimum=2)
    grid = np.concatenate(([0.0], np.arange(1, m + 1) / (m + 1), [1.0]))
    children = np.random.SeedSequence(seed).spawn(budget)
    args = [(truths, grid, basis, basis_size, child) for child in children]

    if parallel:
        with concurrent.futures.ProcessPoolExecutor() as executor:
            results = list(executor.map(_evaluate_candidate, *zip(*args)))
    else:
        results = [_evaluate_candidate(*a) for a in args]

    reasons: Dict[str, Any] = {}
    feasible = []
    for index, (ok, var_f, gap, coefs, scenario, reason) in enumerate(results):
        if ok:
            feasible.append((var_f, index, gap, coefs, scenario))
        else:
            reasons[reason] = reasons.get(reason, 0) + 1

    logger.info("search seed=%d: %d feasible of %d candidates", seed,
                len(feasible), budget)
    if not feasible:
        raise SearchFailureError("no feasible candidate within budget",
                                 {"budget": budget, "skipped": reasons})

    best_var, best_index, _, best_coefs, best = min(feasible,
                                                    key=lambda r: r[:2])
    avg_var_g = z_decomposition(best).avg_var_G
    gaps = [r[2] for r in feasible]
    if min(gaps) < -conf.inequality_tol:
        logger.warning("calibrated candidate with negative gap %.6e",
                       min(gaps))

    return ProbeResult(budget=budget,
                       seed=seed,
                       basis=basis,
                       basis_size=basis_size,
                       feasible=len(feasible),
                       infeasible=budget - len(feasible),
                       best_avg_var_F=float(best_var),
                       best_index=best_index,
                       best_coefficients=best_coefs,
                       best_scenario=best,
                       avg_var_G=avg_var_g,
                       margin_vs_avg_var_G=float(best_var - avg_var_g),
                       min_gap=float(min(gaps)),
                       all_candidates_calibrated=True,
                       candidate_avg_var_F=[float(r[0]) for r in feasible])


def equality_gap_scan(scenarios):
    """Tabulate the equality condition and the gap for calibrated scenarios

    Args:
        scenarios: list of scenarios, list of (id, scenario) pairs or dict
            from id to scenario.

    Returns:
        DataFrame with scenario_id, equality_condition_met, gap and tension
        columns. A tension is a row meeting the equality condition with a gap
        above the configured tension_gap.
    """
    if isinstance(scenarios, dict):
        items = list(scenarios.items())
    else:
        items = [item if isinstance(item, tuple) else (str(k), item)
                 for k, item in enumerate(scenarios)]

    tension_gap = get_config().tension_gap
    rows = []
    for scenario_id, scenario in items:
        report = verify_sharpness(scenario)
        tension = report.equality_condition_met and report.gap > tension_gap
        if tension:
            logger.info("scenario %s: equality condition met with gap %.3e",
                        scenario_id, report.gap)
        rows.append((scenario_id, report.equality_condition_met, report.gap,
                     tension))

    return pd.DataFrame(rows, columns=[SCENARIO_ID, "equality_condition_met",
                                       GAP, "tension"])

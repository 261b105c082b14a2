"""Variance decompositions and the sharpness inequality

The randomized variable H equals the truth draw X_I at a uniformly chosen
index I. Conditioning on the index gives the average truth variance plus the
dispersion of truth means. Conditioning on the PIT value and replacing H by
the forecast quantiles gives the average forecast variance plus the
dispersion of forecast means. Under calibration the first never exceeds the
second.
"""

import logging

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np
import pandas as pd

from sharpcal.base.config import get_config
from sharpcal.base.constants import (
    ALPHA,
    ALPHA_DISPERSION,
    AVG_VAR_F,
    AVG_VAR_G,
    GAP,
    HORIZON,
    MARGIN,
    MU,
    MU_DISPERSION,
    THETA_DEV,
)
from sharpcal.base.errors import (
    ArgumentError,
    HypothesisError,
    NotCalibratedError,
)
from sharpcal.calib import Scenario, finite_calibration_residual
from sharpcal.dist import moments, translate
from sharpcal.util import process_checkpoints, process_grid, to_jsonable


logger = logging.getLogger(__name__)


def _dispersion(values):
    return float(np.mean((values - values.mean()) ** 2))


class ZDecomposition(NamedTuple):
    """Index-conditioned decomposition of Var(H)"""

    var_H_z: float
    avg_var_G: float
    mu_dispersion: float
    mu: np.ndarray

    @property
    def truth_means_equal(self):
        """Whether Var(H) reduces to the average truth variance"""
        return bool(np.ptp(self.mu) <= get_config().equality_tol)


class UDecomposition(NamedTuple):
    """PIT-conditioned decomposition of Var(H) through forecast quantiles"""

    var_H_u_formula: float
    avg_var_F: float
    alpha_dispersion: float
    alpha: np.ndarray


@dataclass(frozen=True)
class DecompositionReport:
    """Both variance decompositions and the sharpness verdict.

    Attributes:
        T (int): horizon.
        avg_var_G (float): average truth variance.
        avg_var_F (float): average forecast variance.
        mu (np.ndarray): truth means.
        alpha (np.ndarray): forecast means.
        mu_dispersion (float): mean squared deviation of truth means.
        alpha_dispersion (float): mean squared deviation of forecast means.
        var_H_z (float): index-conditioned value of Var(H).
        var_H_u_formula (float): PIT-conditioned formula value.
        gap (float): avg_var_F - avg_var_G.
        mean_shifts (np.ndarray): E(G_i) - E(F_i).
        equality_condition_met (bool): every mean shift equals the first.
        inequality_holds (bool): gap is nonnegative within tolerance.
        max_abs_residual (float): calibration residual of the scenario.
        notes (list): findings worth reporting alongside the numbers.
    """

    T: int
    avg_var_G: float
    avg_var_F: float
    mu: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    mu_dispersion: float
    alpha_dispersion: float
    var_H_z: float
    var_H_u_formula: float
    gap: float
    mean_shifts: np.ndarray = field(repr=False)
    equality_condition_met: bool
    inequality_holds: bool
    max_abs_residual: float
    notes: List[str] = field(default_factory=list)

    @property
    def mu_bar(self):
        return float(self.mu.mean())

    @property
    def alpha_bar(self):
        return float(self.alpha.mean())

    def to_dict(self):
        return to_jsonable({
            HORIZON: self.T,
            AVG_VAR_G: self.avg_var_G,
            AVG_VAR_F: self.avg_var_F,
            MU: self.mu,
            "mu_bar": self.mu_bar,
            ALPHA: self.alpha,
            "alpha_bar": self.alpha_bar,
            MU_DISPERSION: self.mu_dispersion,
            ALPHA_DISPERSION: self.alpha_dispersion,
            "var_H_z": self.var_H_z,
            "var_H_u_formula": self.var_H_u_formula,
            GAP: self.gap,
            "mean_shifts": self.mean_shifts,
            "equality_condition_met": self.equality_condition_met,
            "inequality_holds": self.inequality_holds,
            "max_abs_residual": self.max_abs_residual,
            "notes": self.notes,
        })


@dataclass(frozen=True)
class ThetaProfile:
    """Averaged squared forecast quantiles on a probability grid.

    Attributes:
        u_grid (np.ndarray): interior probabilities.
        theta (np.ndarray): (1/T) sum F_i^-1(u)^2 at every grid point.
        reference (np.ndarray, None): reference profile on the same grid.
        sup_deviation (float, None): max |theta - reference|.
    """

    u_grid: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    reference: Optional[np.ndarray] = field(default=None, repr=False)
    sup_deviation: Optional[float] = None

    def to_dict(self):
        return to_jsonable({
            "u_grid": self.u_grid,
            "theta": self.theta,
            "reference": self.reference,
            "sup_deviation": self.sup_deviation,
        })

    def to_frame(self):
        frame = pd.DataFrame({"u": self.u_grid, "theta": self.theta})
        if self.reference is not None:
            frame["reference"] = self.reference
        return frame


@dataclass(frozen=True)
class AsymptoticReport:
    """Sharpness quantities along growing horizons.

    Attributes:
        checkpoints (list): horizons evaluated.
        avg_var_F (list): average forecast variance per checkpoint.
        avg_var_G (list): average truth variance per checkpoint.
        margins (list): avg_var_F - avg_var_G per checkpoint.
        theta_deviations (list): sup distance of every theta profile to the
            one of the previous checkpoint, zero at the first checkpoint.
        inequality_holds (bool): smallest avg_var_F minus largest avg_var_G
            is nonnegative within slack.
        theta_converged (bool): last theta deviation within slack.
        slack (float): tolerance of both verdicts.
        notes (list): flagged hypothesis violations.
    """

    checkpoints: List[int]
    avg_var_F: List[float]
    avg_var_G: List[float]
    margins: List[float]
    theta_deviations: List[float]
    inequality_holds: bool
    theta_converged: bool
    slack: float
    notes: List[str] = field(default_factory=list)

    @property
    def rows(self):
        return list(zip(self.checkpoints, self.avg_var_F, self.avg_var_G,
                        self.margins, self.theta_deviations))

    def to_dict(self):
        return to_jsonable({
            "checkpoints": self.checkpoints,
            AVG_VAR_F: self.avg_var_F,
            AVG_VAR_G: self.avg_var_G,
            "margins": self.margins,
            "theta_deviations": self.theta_deviations,
            "inequality_holds": self.inequality_holds,
            "theta_converged": self.theta_converged,
            "slack": self.slack,
            "notes": self.notes,
        })

    def to_frame(self):
        return pd.DataFrame(self.rows, columns=[HORIZON, AVG_VAR_F, AVG_VAR_G,
                                                MARGIN, THETA_DEV])


def h_eval(s, i, u):
    """Value of H when the index is i (1-based) and the PIT value is u"""
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) \
            or not 1 <= i <= s.T:
        raise ArgumentError(f"index must be in 1..{s.T}, got {i}")
    if not 0.0 < u < 1.0:
        raise ArgumentError(f"u must lie strictly inside (0,1), got {u}")
    return float(s.forecasts[i - 1].quantile(float(u)))


def _moment_table(dists, nodes):
    table = np.array([moments(d, nodes=nodes) for d in dists])
    return table[:, 0], table[:, 1]


def z_decomposition(s, nodes=None):
    """Decompose Var(H) by conditioning on the time index

    Returns:
        ZDecomposition with var_H_z = avg_var_G + mu_dispersion.
    """
    mu, var_g = _moment_table(s.truths, nodes)
    avg_var_g = float(var_g.mean())
    mu_disp = _dispersion(mu)
    return ZDecomposition(var_H_z=avg_var_g + mu_disp,
                          avg_var_G=avg_var_g,
                          mu_dispersion=mu_disp,
                          mu=mu)


def u_decomposition(s, nodes=None):
    """Evaluate the PIT-conditioned formula through forecast quantiles

    The formula value is (1/T) sum E(Y_i^2) - ((1/T) sum E(Y_i))^2 with
    Y_i = F_i^-1(U), computed from quantile-domain moments.
    """
    alpha, var_f = _moment_table(s.forecasts, nodes)
    second = var_f + alpha ** 2
    formula = float(second.mean() - alpha.mean() ** 2)
    return UDecomposition(var_H_u_formula=formula,
                          avg_var_F=float(var_f.mean()),
                          alpha_dispersion=_dispersion(alpha),
                          alpha=alpha)


def verify_sharpness(s, grid_size=None, tol=None, nodes=None):
    """Verify the sharpness inequality and its equality condition

    Args:
        s (Scenario): calibrated scenario.
        grid_size (int): probability grid of the calibration check.
        tol (float): calibration tolerance.
        nodes (int): quadrature order for moments.

    Returns:
        DecompositionReport.

    Raises:
        NotCalibratedError: if the scenario fails the calibration check.
    """
    conf = get_config()
    calibration = finite_calibration_residual(s, grid_size, tol)
    if not calibration.calibrated:
        raise NotCalibratedError(calibration)

    z = z_decomposition(s, nodes)
    u = u_decomposition(s, nodes)
    gap = u.avg_var_F - z.avg_var_G
    shifts = z.mu - u.alpha
    equality = bool(np.max(np.abs(shifts - shifts[0])) <= conf.equality_tol)
    inequality = bool(gap >= -conf.inequality_tol)

    notes = []
    if not inequality:
        notes.append(f"calibrated scenario with negative gap {gap:.6e}")
        logger.warning("sharpness inequality fails: gap=%.6e", gap)
    if equality and gap > conf.tension_gap:
        notes.append(f"mean shifts agree but gap={gap:.6e} exceeds "
                     f"{conf.tension_gap:g}: strict inequality under the "
                     f"equality condition")
        logger.info("equality condition met with gap %.6e", gap)
    if abs(z.var_H_z - u.var_H_u_formula) > conf.tension_gap:
        notes.append(f"index-conditioned Var(H)={z.var_H_z:.6e} differs from "
                     f"the PIT-conditioned formula {u.var_H_u_formula:.6e}")

    return DecompositionReport(T=s.T,
                               avg_var_G=z.avg_var_G,
                               avg_var_F=u.avg_var_F,
                               mu=z.mu,
                               alpha=u.alpha,
                               mu_dispersion=z.mu_dispersion,
                               alpha_dispersion=u.alpha_dispersion,
                               var_H_z=z.var_H_z,
                               var_H_u_formula=u.var_H_u_formula,
                               gap=gap,
                               mean_shifts=shifts,
                               equality_condition_met=equality,
                               inequality_holds=inequality,
                               max_abs_residual=calibration.max_abs_residual,
                               notes=notes)


def recenter(s, nodes=None):
    """Shift every pair by its forecast mean

    Both laws of a pair move by the same amount, so calibration and every
    variance are unchanged while all forecast means become zero.
    """
    alpha = np.array([moments(f, nodes=nodes)[0] for f in s.forecasts])
    forecasts = [translate(f, a) for f, a in zip(s.forecasts, alpha)]
    truths = [translate(g, a) for g, a in zip(s.truths, alpha)]

    support = None
    if s.support is not None:
        support = (s.support[0] - alpha.max(), s.support[1] - alpha.min())

    return Scenario(forecasts, truths, support=support, T=s.T)


def theta_profile(s, u_grid_size=None, reference=None):
    """Average squared forecast quantile on an interior grid

    Args:
        s (Scenario): scenario with bounded forecast supports.
        u_grid_size (int): grid size. Defaults to the configured p_grid_size.
        reference (ThetaProfile): profile to measure the sup distance to.

    Raises:
        HypothesisError: if a forecast has unbounded support.
    """
    if not s.bounded:
        raise HypothesisError("theta profile needs bounded forecast supports")

    grid = process_grid(get_config().p_grid_size if u_grid_size is None
                        else u_grid_size)
    theta = np.zeros_like(grid)
    for f in s.forecasts:
        theta = theta + f.quantile(grid) ** 2
    theta = theta / s.T

    if reference is None:
        return ThetaProfile(u_grid=grid, theta=theta)

    if reference.u_grid.shape != grid.shape \
            or not np.allclose(reference.u_grid, grid, rtol=0, atol=1e-15):
        raise ArgumentError("reference profile lives on a different grid")

    return ThetaProfile(u_grid=grid,
                        theta=theta,
                        reference=reference.theta,
                        sup_deviation=float(np.max(np.abs(theta
                                                          - reference.theta))))


def asymptotic_check(scenario_generator, checkpoints, u_grid_size=None,
                     nodes=None, slack=None):
    """Compare average variances and theta profiles along growing horizons

    Args:
        scenario_generator (callable): maps a horizon T to a Scenario with
            bounded forecast supports.
        checkpoints (list): strictly increasing horizons.
        u_grid_size (int): theta grid size.
        nodes (int): quadrature order for moments.
        slack (float): tolerance of the verdicts. Defaults to the configured
            asymptotic_slack.

    Returns:
        AsymptoticReport.

    Raises:
        HypothesisError: if a generated scenario has unbounded support.
    """
    checkpoints = process_checkpoints(checkpoints)
    slack = get_config().asymptotic_slack if slack is None else float(slack)

    var_f, var_g, margins, devs = [], [], [], []
    previous = None
    for T in checkpoints:
        scenario = scenario_generator(T)
        profile = theta_profile(scenario, u_grid_size, reference=previous)
        z = z_decomposition(scenario, nodes)
        u = u_decomposition(scenario, nodes)

        var_f.append(u.avg_var_F)
        var_g.append(z.avg_var_G)
        margins.append(u.avg_var_F - z.avg_var_G)
        devs.append(0.0 if previous is None else profile.sup_deviation)
        previous = profile
        logger.info("checkpoint T=%d: margin=%.6e theta_dev=%.3e", T,
                    margins[-1], devs[-1])

    inequality = min(var_f) - max(var_g) >= -slack
    converged = devs[-1] <= slack

    notes = []
    if not converged:
        notes.append(f"theta profile moved by {devs[-1]:.6e} at the last "
                     f"checkpoint, beyond slack {slack:g}")
        logger.warning("theta profile has not stabilized: %.6e", devs[-1])

    return AsymptoticReport(checkpoints=checkpoints,
                            avg_var_F=var_f,
                            avg_var_G=var_g,
                            margins=margins,
                            theta_deviations=devs,
                            inequality_holds=bool(inequality),
                            theta_converged=bool(converged),
                            slack=slack,
                            notes=notes)

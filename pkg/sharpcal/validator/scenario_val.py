"""Define Validators for scenario documents and scenarios"""

from numbers import Integral

from sharpcal.base.constants import FORECASTS, HORIZON, TRUTHS
from sharpcal.calib import finite_calibration_residual
from sharpcal.validator.validator import Validator


class HAS_HORIZON(Validator):
    """Checks that a scenario document holds T forecasts and T truths"""

    def __init__(self, fatal=True):
        super().__init__(fatal=fatal)
        self.test_desc = "Forecast and truth lists have length T"

    def validate(self, data):
        if not isinstance(data, dict):
            return None

        T = data.get(HORIZON)
        if isinstance(T, bool) or not isinstance(T, Integral) or T < 1:
            return f"horizon must be a positive integer, not {T!r}"

        errors = []
        for key in (FORECASTS, TRUTHS):
            seq = data.get(key)
            if not isinstance(seq, list):
                errors.append(f"{key} must be a list")
            elif len(seq) != T:
                errors.append(f"expected {T} {key}, got {len(seq)}")
        return errors or None


class HAS_BOUNDED_SUPPORT(Validator):
    """Checks that every forecast of a scenario has bounded support"""

    def __init__(self, fatal=True):
        super().__init__(fatal=fatal)
        self.test_desc = "Every forecast has bounded support"

    def validate(self, data):
        errors = [f"forecasts[{i}] has support [{f.support_lo}, \
{f.support_hi}]" for i, f in enumerate(getattr(data, "forecasts", ()))
                  if not f.bounded]
        return errors or None


class WITHIN_SUPPORT(Validator):
    """Checks that every forecast lies inside the declared support bounds"""

    def __init__(self, slack=1e-12, fatal=True):
        super().__init__(fatal=fatal)
        self.slack = slack
        self.test_desc = "Forecast supports lie inside the scenario bounds"

    def validate(self, data):
        if getattr(data, "support", None) is None:
            return None
        a, b = data.support
        errors = [f"forecasts[{i}] leaves [{a:g}, {b:g}]"
                  for i, f in enumerate(data.forecasts)
                  if f.support_lo < a - self.slack
                  or f.support_hi > b + self.slack]
        return errors or None


class IS_CALIBRATED(Validator):
    """Checks the finite calibration condition.

    Mostly used as a non-fatal check ahead of operations that do not require
    calibration themselves.
    """

    def __init__(self, grid_size=None, tol=None, fatal=False):
        super().__init__(fatal=fatal)
        self.grid_size = grid_size
        self.tol = tol
        self.test_desc = "Scenario satisfies the calibration condition"

    def validate(self, data):
        report = finite_calibration_residual(data, self.grid_size, self.tol)
        if report.calibrated:
            return None
        return f"max |r(p)| = {report.max_abs_residual:.3e} exceeds \
{report.tolerance:.1e}"

"""Define Validators for distribution specs and laws"""

import numpy as np

from sharpcal.base.config import get_config
from sharpcal.base.constants import FORECASTS, TRUTHS
from sharpcal.base.errors import InvariantViolationError
from sharpcal.dist import build_distribution
from sharpcal.util import process_grid
from sharpcal.validator.validator import Validator


class BUILDS_DISTRIBUTIONS(Validator):
    """Checks if every distribution spec of a scenario document builds

    Construction enforces the law invariants (strictly increasing knots and
    values, weights, finite parameters), so every failure message names the
    list, the position and the broken invariant.

    Attributes:
        _lists (tuple): document keys holding distribution specs.
    """

    def __init__(self, lists=(FORECASTS, TRUTHS), fatal=True):
        super().__init__(fatal=fatal)
        self._lists = tuple(lists)
        self.test_desc = "Every distribution spec builds a valid law"

    def validate(self, data):
        if not isinstance(data, dict):
            return None

        errors = []
        for key in self._lists:
            specs = data.get(key)
            if not isinstance(specs, list):
                continue
            for i, spec in enumerate(specs):
                try:
                    build_distribution(spec)
                except InvariantViolationError as exc:
                    errors.extend(f"{key}[{i}]: {v}" for v in exc.violations)
        return errors or None


class ROUND_TRIPS(Validator):
    """Checks cdf(quantile(p)) = p on an interior grid for every law

    Attributes:
        grid_size (int): number of interior grid points.
        tol (float): allowed round-trip error.
    """

    def __init__(self, grid_size=512, tol=None, fatal=True):
        super().__init__(fatal=fatal)
        self.grid_size = grid_size
        self.tol = tol
        self.test_desc = "Every law inverts its quantile function"

    def validate(self, data):
        grid = process_grid(self.grid_size)
        tol = get_config().round_trip_tol if self.tol is None else self.tol

        errors = []
        laws_by_key = ((FORECASTS, getattr(data, "forecasts", ())),
                       (TRUTHS, getattr(data, "truths", ())))
        for key, laws in laws_by_key:
            for i, law in enumerate(laws):
                err = float(np.max(np.abs(law.cdf(law.quantile(grid)) - grid)))
                if not err <= tol:
                    errors.append(f"{key}[{i}] round trip error {err:.3e} \
exceeds {tol:.1e}")
        return errors or None

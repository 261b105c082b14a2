"""Pipes checking calibration and sampling the randomized PIT"""

from sharpcal.base.constants import HORIZON
from sharpcal.calib import (
    asymptotic_calibration_trend,
    finite_calibration_residual,
    sample_randomized_pit,
)
from sharpcal.pipe.pipe import Pipe
from sharpcal.util import process_checkpoints
from sharpcal.validator.presets import SCENARIO


class CalibrationCheck(Pipe):
    """Evaluate the finite calibration residual of a scenario

    Attributes:
        grid_size (int): probability grid size, None for the default.
        tol (float): calibration tolerance, None for the default.
    """

    def __init__(self, grid_size=None, tol=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.grid_size = grid_size
        self.tol = tol

    def transform(self, data, **kwargs):
        return finite_calibration_residual(data, self.grid_size, self.tol)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            grid_size=self.grid_size,
            tol=self.tol,
            **kwargs
        )


class CalibrationTrend(Pipe):
    """Calibration residuals along growing horizons

    The input is a scenario generator: it is requested once per checkpoint
    with the T request argument.

    Attributes:
        checkpoints (list): strictly increasing horizons.
        grid_size (int): probability grid size.
        tol (float): final tolerance.
    """

    def __init__(self, checkpoints, grid_size=None, tol=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.checkpoints = process_checkpoints(checkpoints)
        self.grid_size = grid_size
        self.tol = tol

    def run(self, **kwargs):
        def generate(T):
            return self._source.request(**{**kwargs, HORIZON: T})

        return asymptotic_calibration_trend(generate, self.checkpoints,
                                            self.grid_size, self.tol)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            checkpoints=self.checkpoints,
            grid_size=self.grid_size,
            tol=self.tol,
            **kwargs
        )


class RandomizedPIT(Pipe):
    """Sample the randomized PIT of a scenario

    Attributes:
        n (int): number of draws.
        seed (int): seed of the draws.
    """

    def __init__(self, n, seed):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.n = n
        self.seed = seed

    def transform(self, data, **kwargs):
        return sample_randomized_pit(data, self.n, self.seed)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            n=self.n,
            seed=self.seed,
            **kwargs
        )


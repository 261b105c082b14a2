"""Pipes computing variance decompositions and sharpness verdicts"""

from sharpcal.base.constants import (
    ALPHA,
    ALPHA_DISPERSION,
    AVG_VAR_F,
    AVG_VAR_G,
    HORIZON,
    MU,
    MU_DISPERSION,
)
from sharpcal.scenarios import make_block_repeat
from sharpcal.sharp import (
    ThetaProfile,
    asymptotic_check,
    recenter,
    theta_profile,
    u_decomposition,
    verify_sharpness,
    z_decomposition,
)
from sharpcal.pipe.pipe import Pipe
from sharpcal.util import process_checkpoints
from sharpcal.validator.presets import BOUNDED_SCENARIO, SCENARIO
from sharpcal.validator.scenario_val import IS_CALIBRATED


class Recenter(Pipe):
    """Shift every pair of a scenario by its forecast mean"""

    def __init__(self):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

    def transform(self, data, **kwargs):
        return recenter(data)


class BlockRepeat(Pipe):
    """Repeat a bounded scenario up to a horizon

    The horizon is fixed on construction or taken from the T request
    argument, which lets the pipe act as a scenario generator.

    Attributes:
        T (int): target horizon, None to read it from the request.
    """

    def __init__(self, T=None):
        super().__init__()

        self._source\
            .add_desc(BOUNDED_SCENARIO)

        self.T = T
        if T is None:
            self._req_args.add(HORIZON)

    def run(self, **kwargs):
        T = self.T if self.T is not None else kwargs.get(HORIZON)
        if T is None:
            raise TypeError(f"{type(self).__name__} needs a {HORIZON} request \
argument")
        # the base scenario is requested at its own horizon
        base_kwargs = {k: v for k, v in kwargs.items() if k != HORIZON}
        return make_block_repeat(self._source.request(**base_kwargs), T)

    def transform(self, data, **kwargs):
        T = self.T if self.T is not None else kwargs[HORIZON]
        return make_block_repeat(data, T)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            T=self.T,
            **kwargs
        )


class Decompose(Pipe):
    """Both variance decompositions, without requiring calibration

    Uncalibrated input is let through with a logged warning.
    """

    def __init__(self, nodes=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)\
            .add_desc(IS_CALIBRATED())

        self.nodes = nodes

    def transform(self, data, **kwargs):
        z = z_decomposition(data, self.nodes)
        u = u_decomposition(data, self.nodes)
        return {
            HORIZON: data.T,
            "var_H_z": z.var_H_z,
            AVG_VAR_G: z.avg_var_G,
            MU_DISPERSION: z.mu_dispersion,
            MU: z.mu,
            "truth_means_equal": z.truth_means_equal,
            "var_H_u_formula": u.var_H_u_formula,
            AVG_VAR_F: u.avg_var_F,
            ALPHA_DISPERSION: u.alpha_dispersion,
            ALPHA: u.alpha,
        }

    def copy(self, *args, **kwargs):
        return super().copy(*args, nodes=self.nodes, **kwargs)


class Sharpness(Pipe):
    """Verify the sharpness inequality of a calibrated scenario

    Attributes:
        grid_size (int): calibration grid size.
        tol (float): calibration tolerance.
    """

    def __init__(self, grid_size=None, tol=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.grid_size = grid_size
        self.tol = tol

    def transform(self, data, **kwargs):
        return verify_sharpness(data, self.grid_size, self.tol)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            grid_size=self.grid_size,
            tol=self.tol,
            **kwargs
        )


class Theta(Pipe):
    """Average squared forecast quantiles of a bounded scenario

    Attributes:
        u_grid_size (int): grid size.
        reference (ThetaProfile): optional profile to compare against.
    """

    def __init__(self, u_grid_size=None, reference=None):
        super().__init__()

        self._source\
            .add_desc(BOUNDED_SCENARIO)

        if reference is not None and not isinstance(reference, ThetaProfile):
            raise TypeError(f"reference must be of type {ThetaProfile}, not \
{type(reference)}")
        self.u_grid_size = u_grid_size
        self.reference = reference

    def transform(self, data, **kwargs):
        return theta_profile(data, self.u_grid_size, self.reference)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            u_grid_size=self.u_grid_size,
            reference=self.reference,
            **kwargs
        )


class AsymptoticCheck(Pipe):
    """Sharpness quantities of a scenario generator along checkpoints

    Attributes:
        checkpoints (list): strictly increasing horizons requested from the
            input through the T request argument.
        u_grid_size (int): theta grid size.
    """

    def __init__(self, checkpoints, u_grid_size=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.checkpoints = process_checkpoints(checkpoints)
        self.u_grid_size = u_grid_size

    def run(self, **kwargs):
        def generate(T):
            return self._source.request(**{**kwargs, HORIZON: T})

        return asymptotic_check(generate, self.checkpoints, self.u_grid_size)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            checkpoints=self.checkpoints,
            u_grid_size=self.u_grid_size,
            **kwargs
        )

"""Pipes running the Monte-Carlo oracle and the sharpness search"""

from sharpcal.base.constants import TRUTHS
from sharpcal.calib import Scenario
from sharpcal.dist import ContinuousDistribution
from sharpcal.pipe.pipe import Pipe, PipeBuilder
from sharpcal.probe import BASES, mc_oracle, minimize_sharpness
from sharpcal.validator import IS_TYPE
from sharpcal.validator.presets import SCENARIO


class McOracle(Pipe):
    """Monte-Carlo estimates of Var(H) and its PIT conditionals

    Attributes:
        n (int): number of draws.
        seed (int): seed of the draws.
        u_bins (int): number of PIT bins.
    """

    def __init__(self, n, seed, u_bins=None):
        super().__init__()

        self._source\
            .add_desc(SCENARIO)

        self.n = n
        self.seed = seed
        self.u_bins = u_bins

    def transform(self, data, **kwargs):
        return mc_oracle(data, self.n, self.seed, self.u_bins)

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            n=self.n,
            seed=self.seed,
            u_bins=self.u_bins,
            **kwargs
        )


class MinimizeSharpness(PipeBuilder):
    """Search for the sharpest calibrated forecaster of some truths

    The input is a list of truth laws, a scenario (whose truths are used) or
    a probe config dictionary as built by ProbeConfigTranslator, whose
    budget, seed and basis settings fill in anything not set here.

    This builder has one piece, the perturbation basis, with options "sine"
    and "polynomial" and a "size" keyword. When unset the probe config
    decides, falling back to "sine".

    Attributes:
        budget (int): number of candidates.
        seed (int): seed of the search.
        parallel (bool): evaluate candidates in a process pool.
    """

    _PIECE_OPTIONS = {"basis": tuple(BASES)}

    def __init__(self, budget=None, seed=None, parallel=False):
        super().__init__()

        self._source\
            .add_desc(IS_TYPE((list, tuple, dict, Scenario)))

        self._init_piece(["basis"])

        self.budget = budget
        self.seed = seed
        self.parallel = parallel

    def transform(self, data, **kwargs):
        settings = {}
        if isinstance(data, dict):
            settings = data
            truths = data[TRUTHS]
        elif isinstance(data, Scenario):
            truths = list(data.truths)
        else:
            truths = list(data)

        for truth in truths:
            if not isinstance(truth, ContinuousDistribution):
                raise TypeError(f"truths must be distributions, not \
{type(truth)}")

        basis = self._pieces["basis"]
        size = basis.kwargs.get("size", settings.get("basis_size"))
        return minimize_sharpness(
            truths,
            budget=self.budget if self.budget is not None
            else settings.get("budget"),
            seed=self.seed if self.seed is not None else settings.get("seed"),
            basis_size=size,
            basis=basis.name if basis.name is not None
            else settings.get("basis", "sine"),
            knots=settings.get("knots"),
            parallel=self.parallel,
        )

    def copy(self, *args, **kwargs):
        return super().copy(
            *args,
            budget=self.budget,
            seed=self.seed,
            parallel=self.parallel,
            **kwargs
        )

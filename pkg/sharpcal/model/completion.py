"""Models combining several inputs into one calibrated result"""

from sharpcal.dist import ContinuousDistribution
from sharpcal.model.model import Model
from sharpcal.probe import complete_calibration, equality_gap_scan
from sharpcal.validator import ELEMS_TYPE, IS_TYPE
from sharpcal.validator.presets import SCENARIO


class CompleteCalibration(Model):
    """Complete a calibrated scenario from T-1 forecasts and T truths

    This model has two sources: partial_in, a list of distributions or
    quantile callables, and truths_in, a list of truth distributions.

    Attributes:
        grid: knot count or interior knots of the completion.
    """

    def __init__(self, grid=None):
        super().__init__()

        self._init_source([
            "partial_in",
            "truths_in",
        ])

        self._get_source("partial_in")\
            .add_desc(IS_TYPE((list, tuple)))

        self._get_source("truths_in")\
            .add_desc(IS_TYPE((list, tuple)))\
            .add_desc(ELEMS_TYPE(ContinuousDistribution))

        self.grid = grid

    def run(self, **kwargs):
        partial = self._source_from("partial_in", **kwargs)
        truths = self._source_from("truths_in", **kwargs)
        return complete_calibration(partial, truths, self.grid)

    def copy(self, *args, **kwargs):
        return super().copy(*args, grid=self.grid, **kwargs)


class EqualityGapScan(Model):
    """Tabulate the equality condition and gap of several scenarios

    Every scenario is a named source added with add_scenario(); the table
    rows follow insertion order.
    """

    def __init__(self):
        super().__init__()

    def add_scenario(self, name, new_input):
        """Add a named scenario source

        Raises:
            KeyError: if the name is already used.
        """
        if name in self._source:
            raise KeyError(f"scenario {name} already present")
        self._init_source([name])
        self._get_source(name)\
            .add_desc(SCENARIO)
        return self.set_input(name, new_input)

    def run(self, **kwargs):
        scenarios = {name: self._source_from(name, **kwargs)
                     for name in self._source}
        return equality_gap_scan(scenarios)

"""Define Validator collection presets

These describe the documents and scenarios passed around the graph.
"""

from sharpcal.base.constants import FORECASTS, HORIZON, TRUTHS
from sharpcal.calib import Scenario
from sharpcal.validator.base_val import HAS_KEYS, IS_TYPE
from sharpcal.validator.dist_val import BUILDS_DISTRIBUTIONS, ROUND_TRIPS
from sharpcal.validator.scenario_val import (
    HAS_BOUNDED_SUPPORT,
    HAS_HORIZON,
    WITHIN_SUPPORT,
)


SCENARIO_DOC = [
    IS_TYPE(dict),
    HAS_KEYS([HORIZON, FORECASTS, TRUTHS]),
    HAS_HORIZON(),
    BUILDS_DISTRIBUTIONS(),
]


SCENARIO = [
    IS_TYPE(Scenario),
    WITHIN_SUPPORT(),
    ROUND_TRIPS(),
]


BOUNDED_SCENARIO = SCENARIO + [
    HAS_BOUNDED_SUPPORT(),
]

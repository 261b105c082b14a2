from sharpcal.pipe.pipe import Pipe, PipeLine, PipeBuilder

from sharpcal.pipe.calibration import (
    CalibrationCheck,
    CalibrationTrend,
    RandomizedPIT,
)

from sharpcal.pipe.sharpness import (
    Recenter,
    BlockRepeat,
    Decompose,
    Sharpness,
    Theta,
    AsymptoticCheck,
)

from sharpcal.pipe.probe import (
    McOracle,
    MinimizeSharpness,
)

__all__ = [
    "Pipe",
    "PipeLine",
    "PipeBuilder",
    "CalibrationCheck",
    "CalibrationTrend",
    "RandomizedPIT",
    "Recenter",
    "BlockRepeat",
    "Decompose",
    "Sharpness",
    "Theta",
    "AsymptoticCheck",
    "McOracle",
    "MinimizeSharpness",
]

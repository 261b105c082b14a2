from sharpcal.model.model import Model

from sharpcal.model.completion import (
    CompleteCalibration,
    EqualityGapScan,
)

__all__ = [
    "Model",
    "CompleteCalibration",
    "EqualityGapScan",
]

from sharpcal.external.external import External

from sharpcal.external.file import (
    JsonInFile,
    ReportFile,
)

__all__ = [
    "External",
    "JsonInFile",
    "ReportFile",
]

from sharpcal.application.application import Application

from sharpcal.application.writers import ReportWriter, report_frame

__all__ = [
    "Application",
    "ReportWriter",
    "report_frame",
]

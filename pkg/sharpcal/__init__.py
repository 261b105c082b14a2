"""Calibration and sharpness diagnostics for predictive distributions"""

__version__ = "0.1.0"

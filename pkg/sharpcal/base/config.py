"""Define runtime configuration

All tunable defaults of the toolkit live in a single Config instance. Values
can be updated from a dictionary or a JSON file, and the SHARPCAL_DEFAULT_TOL
environment variable overrides the default calibration tolerances.
"""

import json
import os

from typing import Any, Dict

from sharpcal.base.constants import ENV_DEFAULT_TOL


_DEFAULTS: Dict[str, Any] = {
    "analytic_tol": 1e-9,
    "tabulated_tol": 1e-6,
    "p_grid_size": 512,
    "quadrature_nodes": 256,
    "ks_constant": 1.358,
    "u_bins": 20,
    "compensated_knots": 2048,
    "basis_size": 3,
    "trend_slack": 0.10,
    "asymptotic_slack": 1e-6,
    "equality_tol": 1e-9,
    "inequality_tol": 1e-9,
    "tension_gap": 1e-4,
    "min_slope": 1e-12,
    "round_trip_tol": 1e-10,
}


class Config:
    """Container of numerical defaults.

    Attributes:
        _values (dict): current setting for every known key.
    """

    _values: Dict[str, Any]

    def __init__(self, **overrides):
        self._values = dict(_DEFAULTS)
        if overrides:
            self.update_config(overrides)

    def __getattr__(self, name):
        try:
            return self.__dict__["_values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def update_config(self, new_conf):
        """Update settings with new values

        Args:
            new_conf: dictionary with new settings or path to a JSON file
                holding one.

        Raises:
            TypeError: if new_conf is neither a dict nor a JSON file path.
            KeyError: if a key is not a known setting.
        """
        if isinstance(new_conf, str) and new_conf.endswith(".json"):
            with open(new_conf) as f:
                new_conf = json.load(f)
        elif not isinstance(new_conf, dict):
            raise TypeError(f"config must be a .json file or dictionary, \
not {type(new_conf)}")

        unknown = set(new_conf) - set(_DEFAULTS)
        if unknown:
            raise KeyError(f"unknown settings {sorted(unknown)}, pick from \
{sorted(_DEFAULTS)}")

        for key, value in new_conf.items():
            self._values[key] = type(_DEFAULTS[key])(value)

        return self

    def as_dict(self):
        """Return a copy of every setting"""
        return dict(self._values)

    def copy(self):
        return Config(**self._values)

    @classmethod
    def from_env(cls, environ=None):
        """Build a config with environment overrides applied"""
        return cls().apply_env(environ)

    def apply_env(self, environ=None):
        """Apply environment overrides on top of the current settings"""
        environ = os.environ if environ is None else environ
        tol = environ.get(ENV_DEFAULT_TOL)
        if tol:
            self.update_config({"analytic_tol": tol, "tabulated_tol": tol})
        return self


_config = None


def get_config():
    """Return the process-wide configuration, created on first use"""
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config


def set_config(conf):
    """Replace the process-wide configuration"""
    global _config
    if not isinstance(conf, Config):
        raise TypeError(f"conf must be of type {Config}, not {type(conf)}")
    _config = conf
    return conf

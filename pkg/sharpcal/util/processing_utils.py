"""Argument and output processing utilities"""

import math

from numbers import Integral, Real

import numpy as np

from sharpcal.base.errors import ArgumentError


def process_count(name, value, minimum=1):
    """Standardize a count argument

    Raises:
        ArgumentError: if the value is not an integer of at least minimum.
    """
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ArgumentError(f"{name} must be an integer, not \
{type(value).__name__}")
    if value < minimum:
        raise ArgumentError(f"{name} must be at least {minimum}, got {value}")
    return int(value)


def process_seed(seed):
    """Standardize a seed, refusing missing or non-integer seeds"""
    if seed is None:
        raise ArgumentError("an explicit integer seed is required")
    if isinstance(seed, bool) or not isinstance(seed, Integral) or seed < 0:
        raise ArgumentError(f"seed must be a nonnegative integer, not {seed!r}")
    return int(seed)


def process_tol(tol, default):
    """Return tol if given, else the default, checking it is positive"""
    if tol is None:
        return float(default)
    if not isinstance(tol, Real) or not math.isfinite(tol) or tol <= 0:
        raise ArgumentError(f"tolerance must be a positive number, not {tol}")
    return float(tol)


def process_grid(grid_size):
    """Interior equispaced grid k/(n+1), k = 1..n"""
    grid_size = process_count("grid size", grid_size, minimum=2)
    return np.arange(1, grid_size + 1, dtype=float) / (grid_size + 1)


def process_checkpoints(checkpoints):
    """Standardize a strictly increasing list of positive horizons"""
    checkpoints = [process_count("checkpoint", t) for t in checkpoints]
    if not checkpoints:
        raise ArgumentError("at least one checkpoint is needed")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ArgumentError(f"checkpoints must be strictly increasing, got \
{checkpoints}")
    return checkpoints


def to_jsonable(obj):
    """Recursively convert numpy values into plain JSON types"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    return obj


"""Small input-validation helpers used across the package."""
from __future__ import annotations

import math
from typing import Any, Sequence

import numpy as np

from .errors import InputError


def require(condition: bool, message: str, exc: type[Exception] = InputError) -> None:
    if not condition:
        raise exc(message)


def check_finite_scalar(name: str, value: Any) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(out):
        raise InputError(f"{name} must be finite, got {out!r}")
    return out


def as_float_array(name: str, values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Convert to a 1-D float64 array, rejecting non-finite entries."""
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InputError(f"{name}[{bad}] is not finite: {arr[bad]!r}")
    return arr


def check_fractional_order(nu: float, upper: float | None = None) -> float:
    """Validate a fractional differentiation order (finite, >= 0)."""
    value = check_finite_scalar("fractional order", nu)
    require(value >= 0.0, f"fractional order must be >= 0, got {value}")
    if upper is not None:
        require(value <= upper, f"fractional order must be <= {upper}, got {value}")
    return value

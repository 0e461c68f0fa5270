"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_square(a, name="matrix"):
    """Coerce ``a`` to float64 with shape (..., m, m), m >= 1."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2] or arr.shape[-1] < 1:
        raise ValueError(
            f"{name} must have shape (..., m, m) with m >= 1, got {arr.shape}"
        )
    return arr


def check_finite(arr, name="array"):
    """Raise if ``arr`` contains NaN or infinity."""
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_same_order(a, b, name_a="a", name_b="b"):
    """Raise unless the two stacks share the same trailing matrix order."""
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(
            f"{name_a} and {name_b} must have equal matrix order, "
            f"got {a.shape[-1]} and {b.shape[-1]}"
        )


def check_series(x, name="series"):
    """Coerce a time series to float64 with shape (N+1, d), all finite."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(
            f"{name} must have shape (n_points, n_channels) with both >= 1, "
            f"got {arr.shape}"
        )
    check_finite(arr, name)
    return arr


def check_vector(v, length=None, name="vector"):
    """Coerce to a finite 1-D float64 array, optionally of fixed length."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {arr.shape[0]}")
    check_finite(arr, name)
    return arr

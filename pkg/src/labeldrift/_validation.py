"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_label_vector(values, n_labels=None, name="labels"):
    """Validate a 1-D binary label vector and return it as uint8."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n_labels is not None and arr.shape[0] != n_labels:
        raise ValueError(f"{name} must have {n_labels} entries, got {arr.shape[0]}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return arr.astype(np.uint8)


def check_label_matrix(window, n_labels=None, name="window"):
    """Validate a sequence of equal-length binary label vectors, return (m, n) uint8."""
    rows = list(window)
    if not rows:
        if n_labels is None:
            raise ValueError(f"empty {name} needs an explicit n_labels")
        return np.zeros((0, n_labels), dtype=np.uint8)
    try:
        arr = np.asarray(rows)
    except ValueError as err:
        raise ValueError(f"{name} rows have inconsistent lengths") from err
    if arr.ndim != 2 or arr.dtype == object:
        raise ValueError(f"{name} rows have inconsistent lengths or shapes")
    if n_labels is not None and arr.shape[1] != n_labels:
        raise ValueError(f"{name} rows must have {n_labels} entries, got {arr.shape[1]}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return arr.astype(np.uint8)


def check_feature_vector(values, n_features=None, name="features"):
    """Validate a 1-D numeric feature vector and return it as float64."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n_features is not None and arr.shape[0] != n_features:
        raise ValueError(f"{name} must have {n_features} entries, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite, got {values!r}")
    return arr


def check_binary_flag(value, name="value"):
    """Validate a scalar 0/1 flag (plain ints and bools accepted), return int."""
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    try:
        flag = int(value)
    except (TypeError, ValueError) as err:
        raise ValueError(f"{name} must be 0 or 1, got {value!r}") from err
    if flag not in (0, 1) or (not float(value).is_integer()):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")
    return flag

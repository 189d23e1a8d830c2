"""Decibel conversions for scalars and arrays."""

from __future__ import annotations

import numpy as np

ArrayLike = float | np.ndarray


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    """Power ratio from decibels, 10^(x/10)."""
    result = np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)
    return float(result) if np.ndim(result) == 0 else result


def linear_to_db(value: ArrayLike) -> ArrayLike:
    result = 10.0 * np.log10(np.asarray(value, dtype=float))
    return float(result) if np.ndim(result) == 0 else result

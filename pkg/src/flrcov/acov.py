"""Centering and empirical autocovariance surfaces."""
from __future__ import annotations

import numpy as np

from flrcov.errors import LagOutOfRangeError
from flrcov.fgrid import as_sample

__all__ = ["center", "autocov_surface"]


def center(sample) -> np.ndarray:
    """Subtract the pointwise sample mean curve from every row.

    Raises :class:`~flrcov.errors.InsufficientSampleError` when fewer than
    two curves are given.
    """
    x = as_sample(sample)
    # shift by the first curve first: exact zeros for constant columns
    d = x - x[0]
    return d - d.mean(axis=0)


def autocov_surface(centered, lag: int) -> np.ndarray:
    """Lag-``lag`` autocovariance surface with the ``1/T`` divisor.

    Entry ``(i, j)`` is ``(1/T) sum_t c[t, i] c[t + lag, j]``.  Negative lags
    give the transpose of the matching positive lag.
    """
    c = np.asarray(centered, dtype=float)
    T = c.shape[0]
    lag = int(lag)
    if abs(lag) >= T:
        raise LagOutOfRangeError(f"lag {lag} out of range for T={T}")
    if lag < 0:
        return autocov_surface(c, -lag).T
    return c[: T - lag].T @ c[lag:] / T

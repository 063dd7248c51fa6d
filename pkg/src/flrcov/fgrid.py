"""Midpoint discretisation of [0, 1] and L2 numerics on it.

Curves are 1-d arrays of length ``n`` and surfaces are ``(n, n)`` arrays
whose entry ``(i, j)`` is ``F(u_i, u_j)``.  Every integral is a midpoint
Riemann sum with uniform weight ``1/n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flrcov.errors import DimensionError, InsufficientSampleError

__all__ = [
    "Grid",
    "as_sample",
    "surface_norm",
    "surface_trace",
    "surface_distance_sq",
    "surface_inner",
]


@dataclass(frozen=True)
class Grid:
    """Uniform midpoint grid ``u_i = (i - 1/2) / n`` on [0, 1]."""

    n: int = 100

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"grid size must be a positive integer, got {self.n!r}")

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) / self.n

    @property
    def weight(self) -> float:
        return 1.0 / self.n

    def surface(self, func) -> np.ndarray:
        """Evaluate a vectorised ``func(u, s)`` on the grid."""
        u = self.points
        return np.asarray(func(u[:, None], u[None, :]), dtype=float) * np.ones((self.n, self.n))

    def curve(self, func) -> np.ndarray:
        return np.asarray(func(self.points), dtype=float) * np.ones(self.n)


def as_sample(data) -> np.ndarray:
    """Validate a ``(T, n)`` curve sample and return it as a float array."""
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DimensionError(f"curve sample must be 2-d (T, n), got shape {x.shape}")
    if x.shape[0] < 2:
        raise InsufficientSampleError(f"need at least 2 curves, got {x.shape[0]}")
    return x


def _as_surface(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f"surface must be square, got shape {s.shape}")
    return s


def surface_norm(s) -> float:
    """L2[0,1]^2 norm, ``sqrt(mean(S**2))`` on the midpoint grid."""
    s = _as_surface(s)
    n = s.shape[0]
    return float(np.sqrt(np.sum(s * s)) / n)


def surface_trace(s) -> float:
    """Integral of the diagonal, ``(1/n) sum_i S(u_i, u_i)``."""
    s = _as_surface(s)
    return float(np.trace(s) / s.shape[0])


def surface_inner(a, b) -> float:
    a, b = _as_surface(a), _as_surface(b)
    if a.shape != b.shape:
        raise DimensionError(f"surfaces on different grids: {a.shape} vs {b.shape}")
    return float(np.sum(a * b) / a.shape[0] ** 2)


def surface_distance_sq(a, b) -> float:
    """Squared L2 distance ``||A - B||^2`` between surfaces on one grid."""
    a, b = _as_surface(a), _as_surface(b)
    if a.shape != b.shape:
        raise DimensionError(f"surfaces on different grids: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sum(d * d) / a.shape[0] ** 2)

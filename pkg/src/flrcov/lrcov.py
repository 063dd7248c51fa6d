"""Kernel-smoothed long-run covariance estimator and lag-weighted pilots.

The estimator is

    C_hat(u, s) = sum_l W(l / h) gamma_hat_l(u, s)

summed over every lag the sample provides (``|l| <= T - 1``) and, for
compact windows, no further than ``ceil(support * h)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import toeplitz

from flrcov.acov import autocov_surface
from flrcov.kernels import KernelSpec, kernel_weights

__all__ = [
    "LrcovEstimate",
    "lag_limit",
    "lag_weighted_sum",
    "lrcov_estimate",
    "weighted_pilot",
    "write_surface_csv",
    "read_surface_csv",
]


@dataclass(frozen=True)
class LrcovEstimate:
    surface: np.ndarray
    kernel: KernelSpec
    bandwidth: float
    lag_cap: int

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the integral operator, in ascending order."""
        return np.linalg.eigvalsh(self.surface) / self.surface.shape[0]


def lag_limit(k: KernelSpec, h: float, T: int) -> int:
    """Largest lag that can carry weight: ``min(T - 1, ceil(support * h))``."""
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    if not k.compact:
        return T - 1
    return min(T - 1, math.ceil(k.support_bound * h))


def lag_weighted_sum(centered: np.ndarray, coef: np.ndarray) -> tuple[np.ndarray, int]:
    """``coef[0] g_0 + sum_{l>=1} coef[l] (g_l + g_l^T)`` for a centred sample.

    Returns the surface and the largest lag with a nonzero coefficient.
    Picks between a per-lag loop and the quadratic form ``c^T K c / T``
    with a Toeplitz ``K``, whichever needs fewer flops.
    """
    c = np.asarray(centered, dtype=float)
    T, n = c.shape
    coef = np.asarray(coef, dtype=float)[:T]
    nz = np.flatnonzero(coef)
    lag_cap = int(nz[-1]) if nz.size else 0
    coef = coef[: lag_cap + 1]
    if len(nz) * n <= T + n:
        out = np.zeros((n, n))
        for lag in nz:
            g = autocov_surface(c, lag)
            if lag == 0:
                out += coef[0] * g
            else:
                out += coef[lag] * (g + g.T)
        return out, lag_cap
    col = np.zeros(T)
    col[: lag_cap + 1] = coef
    K = toeplitz(col)
    out = c.T @ (K @ c) / T
    return (out + out.T) / 2.0, lag_cap


def _coefficients(k: KernelSpec, h: float, T: int, p: int) -> np.ndarray:
    L = lag_limit(k, h, T)
    w = kernel_weights(k, h, L)
    if p:
        w = w * np.arange(L + 1, dtype=float) ** p
    return w


def lrcov_estimate(centered, k: KernelSpec, h: float) -> LrcovEstimate:
    """Long-run covariance estimate of a centred ``(T, n)`` sample."""
    c = np.asarray(centered, dtype=float)
    surface, cap = lag_weighted_sum(c, _coefficients(k, h, c.shape[0], 0))
    return LrcovEstimate(surface, k, float(h), cap)


def weighted_pilot(centered, k: KernelSpec, h: float, p: int) -> np.ndarray:
    """Pilot ``sum_l W(l / h) |l|^p gamma_hat_l``; ``p = 0`` is the estimate itself."""
    if p < 0 or int(p) != p:
        raise ValueError(f"p must be a nonnegative integer, got {p}")
    c = np.asarray(centered, dtype=float)
    return lag_weighted_sum(c, _coefficients(k, h, c.shape[0], int(p)))[0]


def write_surface_csv(path, surface) -> Path:
    """Write an ``(n, n)`` surface row-major with 17 significant digits."""
    path = Path(path)
    np.savetxt(path, np.asarray(surface, dtype=float), fmt="%.17g", delimiter=",")
    return path


def read_surface_csv(path) -> np.ndarray:
    s = np.loadtxt(path, delimiter=",", ndmin=2)
    if s.shape[0] != s.shape[1]:
        raise ValueError(f"{path}: surface CSV is not square ({s.shape})")
    return s

"""Lag-window weight functions.

Four finite-order windows (Bartlett, Parzen, Tukey-Hanning, quadratic
spectral) and the infinite-order flat-top window of Politis and Romano.
Each :class:`KernelSpec` carries the metadata needed by the bandwidth
formula: the order ``q``, the characteristic constant ``|w|`` with
``W(x) = 1 - |w| |x|^q + o(|x|^q)`` and the integral of ``W**2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from flrcov.errors import UnsupportedKernelError

__all__ = [
    "Family",
    "KernelSpec",
    "KERNEL_NAMES",
    "get_kernel",
    "kernel_eval",
    "kernel_weights",
    "kernel_order_limit_check",
]

# QS argument scale: W_QS(x) = 3/z^2 (sin z / z - cos z), z = 6 pi x / 5
_QS_SCALE = 6.0 * math.pi / 5.0
# below this |z| the closed form loses digits to cancellation
_QS_SERIES_CUTOFF = 1e-1


class Family(str, Enum):
    BARTLETT = "bartlett"
    PARZEN = "parzen"
    TUKEY_HANNING = "tukey-hanning"
    QUADRATIC_SPECTRAL = "qs"
    FLAT_TOP = "flat-top"


KERNEL_NAMES = tuple(f.value for f in Family)


@dataclass(frozen=True)
class KernelSpec:
    """A weight function and its order/constant metadata.

    ``k1`` and ``k2`` are only meaningful for the flat-top family, where
    ``W(x) = 1`` on ``|x| < k1`` and decays linearly to zero at ``k2``.
    """

    family: Family
    k1: float = 0.5
    k2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is not Family.FLAT_TOP:
            # k1, k2 carry no meaning here; normalise so equality ignores them
            object.__setattr__(self, "k1", 0.5)
            object.__setattr__(self, "k2", 1.0)
        if self.family is Family.FLAT_TOP and not 0 < self.k1 < self.k2:
            raise ValueError(f"flat-top needs 0 < k1 < k2, got k1={self.k1}, k2={self.k2}")

    @property
    def name(self) -> str:
        return self.family.value

    @property
    def order(self) -> float:
        """``q``; ``math.inf`` for the flat-top window."""
        return {
            Family.BARTLETT: 1,
            Family.PARZEN: 2,
            Family.TUKEY_HANNING: 2,
            Family.QUADRATIC_SPECTRAL: 2,
            Family.FLAT_TOP: math.inf,
        }[self.family]

    @property
    def finite_order(self) -> bool:
        return self.family is not Family.FLAT_TOP

    @property
    def support_bound(self) -> float:
        if self.family is Family.QUADRATIC_SPECTRAL:
            return math.inf
        if self.family is Family.FLAT_TOP:
            return float(self.k2)
        return 1.0

    @property
    def compact(self) -> bool:
        return math.isfinite(self.support_bound)

    @property
    def char_constant(self) -> float | None:
        """``|w|`` (``None`` for flat-top, whose order is infinite)."""
        return {
            Family.BARTLETT: 1.0,
            Family.PARZEN: 6.0,
            Family.TUKEY_HANNING: math.pi ** 2 / 4.0,
            Family.QUADRATIC_SPECTRAL: _QS_SCALE ** 2 / 10.0,
            Family.FLAT_TOP: None,
        }[self.family]

    @property
    def l2_integral(self) -> float:
        """``int W(x)**2 dx`` over the real line."""
        if self.family is Family.FLAT_TOP:
            return 2.0 * self.k1 + 2.0 * (self.k2 - self.k1) / 3.0
        return {
            Family.BARTLETT: 2.0 / 3.0,
            Family.PARZEN: 151.0 / 280.0,
            Family.TUKEY_HANNING: 0.75,
            Family.QUADRATIC_SPECTRAL: 1.0,
        }[self.family]

    def __call__(self, x):
        return kernel_eval(self, x)

    def to_dict(self) -> dict:
        d = {"family": self.name, "order": _order_json(self.order)}
        if self.family is Family.FLAT_TOP:
            d.update(k1=self.k1, k2=self.k2)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(Family(d["family"]), d.get("k1", 0.5), d.get("k2", 1.0))


def _order_json(q):
    return "inf" if math.isinf(q) else int(q)


def get_kernel(name: str, k1: float = 0.5, k2: float = 1.0) -> KernelSpec:
    """Look a kernel up by its CLI name, e.g. ``"bartlett"`` or ``"flat-top"``."""
    try:
        family = Family(name.lower())
    except ValueError:
        raise ValueError(
            f"unknown kernel {name!r}; choose from {', '.join(KERNEL_NAMES)}"
        ) from None
    return KernelSpec(family, k1, k2)


def _qs(x: np.ndarray) -> np.ndarray:
    z = _QS_SCALE * np.abs(x)
    out = np.empty_like(z)
    small = z < _QS_SERIES_CUTOFF
    zs = z[small] ** 2
    out[small] = 1.0 - zs / 10.0 + zs ** 2 / 280.0 - zs ** 3 / 15120.0
    zb = z[~small]
    out[~small] = 3.0 / zb ** 2 * (np.sin(zb) / zb - np.cos(zb))
    return out


def kernel_eval(k: KernelSpec, x):
    """Evaluate ``W(x)``; accepts scalars or arrays."""
    xa = np.abs(np.asarray(x, dtype=float))
    fam = k.family
    if fam is Family.BARTLETT:
        out = np.where(xa <= 1.0, 1.0 - xa, 0.0)
    elif fam is Family.PARZEN:
        out = np.where(
            xa <= 0.5,
            1.0 - 6.0 * xa ** 2 + 6.0 * xa ** 3,
            np.where(xa <= 1.0, 2.0 * (1.0 - xa) ** 3, 0.0),
        )
    elif fam is Family.TUKEY_HANNING:
        out = np.where(xa <= 1.0, (1.0 + np.cos(np.pi * xa)) / 2.0, 0.0)
    elif fam is Family.QUADRATIC_SPECTRAL:
        out = _qs(np.atleast_1d(xa)).reshape(xa.shape)
    else:
        out = np.where(
            xa < k.k1,
            1.0,
            np.where(xa < k.k2, (k.k2 - xa) / (k.k2 - k.k1), 0.0),
        )
    if out.ndim == 0:
        return float(out)
    return out


def kernel_weights(k: KernelSpec, h: float, lag_max: int | None = None) -> np.ndarray:
    """Weights ``W(l / h)`` for lags ``l = 0, ..., lag_max``.

    For compact windows ``lag_max`` defaults to ``ceil(support_bound * h)``;
    the quadratic spectral window has unbounded support, so the caller
    must supply the truncation.
    """
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    if lag_max is None:
        if not k.compact:
            raise ValueError(f"{k.name} has unbounded support; lag_max is required")
        lag_max = math.ceil(k.support_bound * h)
    lags = np.arange(int(lag_max) + 1, dtype=float)
    return np.atleast_1d(kernel_eval(k, lags / h))


def kernel_order_limit_check(k: KernelSpec, x: float = 1e-4) -> float:
    """Numerical ``|x^-q (W(x) - 1)|`` at a small ``x``."""
    if not k.finite_order:
        raise UnsupportedKernelError(f"{k.name} has infinite order; no characteristic constant")
    return abs((kernel_eval(k, x) - 1.0) / x ** k.order)

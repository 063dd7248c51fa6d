"""Bandwidth choices for the long-run covariance estimator.

``plugin_bandwidth`` is the plug-in rule: pilot estimates of ``C`` and of
the lag-weighted ``C^(q)`` are computed with a pilot window and bandwidth
``h1``, then substituted into the AMSNE-optimal constant

    c0 = (q ||C^(q)||^2)^(1/(1+2q)) * ((||C||^2 + tr(C)^2) int W^2)^(-1/(1+2q))

and the bandwidth is ``c0 * T^(1/(1+2q))``.  Passing ``derived=True``
replaces ``q ||C^(q)||^2`` by ``2 q w^2 ||C^(q)||^2``, the constant
obtained by minimising the two leading AMSNE terms directly.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from flrcov.acov import autocov_surface, center
from flrcov.errors import DegenerateInputError, InsufficientSampleError, UnsupportedKernelError
from flrcov.fgrid import surface_norm, surface_trace
from flrcov.kernels import KernelSpec
from flrcov.lrcov import weighted_pilot

__all__ = [
    "H_MIN",
    "BandwidthReport",
    "c0_from_surfaces",
    "plugin_bandwidth",
    "fixed_bandwidth",
    "adaptive_initial_bandwidth",
    "default_pilot_bandwidth",
]

H_MIN = 1.0


@dataclass(frozen=True)
class BandwidthReport:
    h_opt_hat: float
    c0_hat: float
    pilot_norm_q: float
    pilot_norm_0: float
    pilot_trace: float
    h1: float
    pilot_kernel: KernelSpec
    final_kernel: KernelSpec
    floored: bool
    derived: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pilot_kernel"] = self.pilot_kernel.to_dict()
        d["final_kernel"] = self.final_kernel.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BandwidthReport":
        d = dict(d)
        d["pilot_kernel"] = KernelSpec.from_dict(d["pilot_kernel"])
        d["final_kernel"] = KernelSpec.from_dict(d["final_kernel"])
        return cls(**d)


def _c0(norm_q_sq, norm_0_sq, trace, final_kernel, derived):
    if not final_kernel.finite_order:
        raise UnsupportedKernelError("final kernel must have finite order")
    q = final_kernel.order
    base = (norm_0_sq + trace ** 2) * final_kernel.l2_integral
    if not base > 0:
        raise DegenerateInputError("||C||^2 + tr(C)^2 is zero; c0 is undefined")
    scale = 2.0 * q * final_kernel.char_constant ** 2 if derived else q
    expo = 1.0 / (1.0 + 2.0 * q)
    return (scale * norm_q_sq) ** expo * base ** (-expo)


def c0_from_surfaces(cq, c0_surface, final_kernel: KernelSpec, derived: bool = False) -> float:
    """Optimal-bandwidth constant from ``C^(q)`` and ``C`` surfaces."""
    return _c0(
        surface_norm(cq) ** 2,
        surface_norm(c0_surface) ** 2,
        surface_trace(c0_surface),
        final_kernel,
        derived,
    )


def default_pilot_bandwidth(T: int) -> float:
    return fixed_bandwidth(T, 0.2)


def plugin_bandwidth(
    sample,
    pilot_kernel: KernelSpec,
    h1: float,
    final_kernel: KernelSpec,
    *,
    h_min: float = H_MIN,
    derived: bool = False,
    centered: bool = False,
) -> BandwidthReport:
    """Plug-in bandwidth for ``final_kernel`` using pilots at ``(pilot_kernel, h1)``.

    A sample whose pilot ``C`` vanishes identically (e.g. identical rows)
    has no defined ``c0``; it is reported as ``c0 = 0`` and the floor applies.
    """
    if not final_kernel.finite_order:
        raise UnsupportedKernelError("final kernel must have finite order")
    if not h_min > 0:
        raise ValueError(f"h_min must be positive, got {h_min}")
    c = np.asarray(sample, dtype=float) if centered else center(sample)
    T = c.shape[0]
    q = int(final_kernel.order)
    pilot_0 = weighted_pilot(c, pilot_kernel, h1, 0)
    pilot_q = weighted_pilot(c, pilot_kernel, h1, q)
    norm_0 = surface_norm(pilot_0)
    norm_q = surface_norm(pilot_q)
    trace = surface_trace(pilot_0)
    try:
        c0_hat = _c0(norm_q ** 2, norm_0 ** 2, trace, final_kernel, derived)
    except DegenerateInputError:
        c0_hat = 0.0
    h = c0_hat * T ** (1.0 / (1.0 + 2.0 * q))
    floored = not h > h_min
    return BandwidthReport(
        h_opt_hat=float(h_min if floored else h),
        c0_hat=float(c0_hat),
        pilot_norm_q=norm_q,
        pilot_norm_0=norm_0,
        pilot_trace=trace,
        h1=float(h1),
        pilot_kernel=pilot_kernel,
        final_kernel=final_kernel,
        floored=floored,
        derived=derived,
    )


def fixed_bandwidth(T: int, exponent: float) -> float:
    """``T ** exponent``, unrounded."""
    if T < 2:
        raise InsufficientSampleError(f"need T >= 2, got {T}")
    if not 0 < exponent < 1:
        raise ValueError(f"exponent must lie in (0, 1), got {exponent}")
    return float(T) ** exponent


def adaptive_initial_bandwidth(
    sample,
    *,
    threshold_const: float = 1.4,
    min_run: int = 5,
    centered: bool = False,
) -> float:
    """Data-driven pilot bandwidth from the decay of ``||gamma_hat_l||``.

    Finds the smallest lag ``m`` after which ``K_T`` consecutive
    normalised autocovariance norms fall below
    ``threshold_const * sqrt(log10(T) / T)``, with
    ``K_T = max(min_run, ceil(sqrt(log10 T)))``, and returns ``2 m``
    (``1`` when ``m = 0``), capped at ``sqrt(T)``.  The constants are
    tunable.
    """
    c = np.asarray(sample, dtype=float) if centered else center(sample)
    T = c.shape[0]
    if T < 20:
        raise InsufficientSampleError(f"adaptive pilot bandwidth needs T >= 20, got {T}")
    cap = math.sqrt(T)
    norm0 = surface_norm(autocov_surface(c, 0))
    if norm0 == 0:
        return 1.0
    thresh = threshold_const * math.sqrt(math.log10(T) / T)
    run = max(min_run, math.ceil(math.sqrt(math.log10(T))))
    # lags beyond 2 * cap cannot change the capped answer
    max_lag = min(T - 1, math.ceil(cap / 2) + run + 1)
    small = np.array(
        [surface_norm(autocov_surface(c, lag)) / norm0 < thresh for lag in range(1, max_lag + 1)]
    )
    for m in range(0, max_lag - run + 1):
        if small[m : m + run].all():
            return 1.0 if m == 0 else min(2.0 * m, cap)
    return cap

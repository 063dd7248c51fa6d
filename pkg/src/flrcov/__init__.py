"""Long-run covariance estimation for functional time series.

The estimator smooths empirical autocovariance surfaces with a lag
window; :func:`plugin_bandwidth` chooses the bandwidth by plugging pilot
estimates into the AMSNE-optimal formula.
"""
from flrcov.acov import autocov_surface, center
from flrcov.bandwidth import (
    BandwidthReport,
    adaptive_initial_bandwidth,
    c0_from_surfaces,
    fixed_bandwidth,
    plugin_bandwidth,
)
from flrcov.dgp import DgpSpec, RngStream, get_dgp, simulate, true_lrcov
from flrcov.fgrid import Grid, surface_distance_sq, surface_norm, surface_trace
from flrcov.kernels import KernelSpec, get_kernel, kernel_eval, kernel_weights
from flrcov.lrcov import LrcovEstimate, lrcov_estimate, weighted_pilot

__version__ = "0.1.0"

__all__ = [
    "BandwidthReport",
    "DgpSpec",
    "Grid",
    "KernelSpec",
    "LrcovEstimate",
    "RngStream",
    "adaptive_initial_bandwidth",
    "autocov_surface",
    "c0_from_surfaces",
    "center",
    "fixed_bandwidth",
    "get_dgp",
    "get_kernel",
    "kernel_eval",
    "kernel_weights",
    "lrcov_estimate",
    "plugin_bandwidth",
    "simulate",
    "surface_distance_sq",
    "surface_norm",
    "surface_trace",
    "true_lrcov",
    "weighted_pilot",
]

"""Functional time series generators driven by Brownian motion.

Four families, with ``W_i`` iid standard Brownian motions:

* ``MA_SCALAR``     X_i = W_i + phi * sum_{j=1..p} W_{i-j}
* ``FAR_SCALAR``    X_i = phi * X_{i-1} + W_i
* ``MA_OPERATOR``   X_i = W_i + sum_{j=1..p} int psi(., s) W_{i-j}(s) ds
* ``FAR_OPERATOR``  X_i = int psi(., s) X_{i-1}(s) ds + W_i

Scalar families have closed-form long-run covariances (multiples of
``min(u, s)``).  Operator families do not; :func:`reference_lrcov_mc`
approximates them from the covariance of many independent sample means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.signal import lfilter

from flrcov.errors import DimensionError, InsufficientSampleError
from flrcov.fgrid import Grid, surface_norm

__all__ = [
    "DgpFamily",
    "DgpSpec",
    "RngStream",
    "DGP_NAMES",
    "get_dgp",
    "psi1",
    "psi2",
    "brownian_paths",
    "brownian_motion",
    "apply_operator",
    "simulate",
    "scalar_autocov",
    "true_lrcov",
    "true_weighted_lrcov",
    "reference_lrcov_mc",
]

DEFAULT_BURN_IN = 50


class DgpFamily(str, Enum):
    MA_SCALAR = "ma-scalar"
    FAR_SCALAR = "far-scalar"
    MA_OPERATOR = "ma-operator"
    FAR_OPERATOR = "far-operator"


def psi1(t, s):
    return 0.34 * np.exp(0.5 * (t ** 2 + s ** 2))


def psi2(t, s):
    return 1.5 * np.minimum(t, s)


@dataclass(frozen=True)
class RngStream:
    """One reproducible random stream: replication ``r`` uses ``stream_id=r``."""

    seed: int
    stream_id: int = 0

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.seed_sequence())


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class DgpSpec:
    family: DgpFamily
    phi: float = 0.0
    p: int = 0
    psi: Callable | None = field(default=None, compare=False)
    psi_name: str | None = None
    burn_in: int = DEFAULT_BURN_IN
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", DgpFamily(self.family))
        if self.p < 0 or int(self.p) != self.p:
            raise ValueError(f"p must be a nonnegative integer, got {self.p}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be nonnegative, got {self.burn_in}")
        if self.family is DgpFamily.FAR_SCALAR and not abs(self.phi) < 1:
            raise ValueError(f"FAR(1) needs |phi| < 1, got {self.phi}")
        if self.is_operator and self.psi is None:
            raise ValueError(f"{self.family.value} needs an operator kernel psi")

    @property
    def is_operator(self) -> bool:
        return self.family in (DgpFamily.MA_OPERATOR, DgpFamily.FAR_OPERATOR)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.family is DgpFamily.MA_SCALAR:
            return f"ma*_{self.phi:g}({self.p})"
        if self.family is DgpFamily.FAR_SCALAR:
            return f"far*_{self.phi:g}(1)"
        if self.family is DgpFamily.MA_OPERATOR:
            return f"ma_{self.psi_name}({self.p})"
        return f"far_{self.psi_name}(1)"

    def psi_surface(self, grid: Grid) -> np.ndarray:
        return grid.surface(self.psi)

    def to_dict(self) -> dict:
        d = {"name": self.label, "family": self.family.value}
        if self.is_operator:
            d["psi"] = self.psi_name
        else:
            d["phi"] = self.phi
        if self.family in (DgpFamily.MA_SCALAR, DgpFamily.MA_OPERATOR):
            d["p"] = self.p
        else:
            d["burn_in"] = self.burn_in
        return d


_REGISTRY = {
    "ma0": dict(family=DgpFamily.MA_SCALAR, phi=1.0, p=0),
    "ma1": dict(family=DgpFamily.MA_SCALAR, phi=0.5, p=1),
    "ma4": dict(family=DgpFamily.MA_SCALAR, phi=0.5, p=4),
    "ma8": dict(family=DgpFamily.MA_SCALAR, phi=0.5, p=8),
    "ma-psi4": dict(family=DgpFamily.MA_OPERATOR, psi=psi1, psi_name="psi1", p=4),
    "far1": dict(family=DgpFamily.FAR_SCALAR, phi=0.5),
    "far-psi1": dict(family=DgpFamily.FAR_OPERATOR, psi=psi2, psi_name="psi2"),
}
DGP_NAMES = tuple(_REGISTRY)


def get_dgp(name: str, *, phi=None, p=None, burn_in=None) -> DgpSpec:
    """Build one of the named generators, optionally overriding parameters."""
    try:
        kw = dict(_REGISTRY[name])
    except KeyError:
        raise ValueError(f"unknown dgp {name!r}; choose from {', '.join(DGP_NAMES)}") from None
    kw["name"] = name
    if phi is not None:
        if kw["family"] in (DgpFamily.MA_OPERATOR, DgpFamily.FAR_OPERATOR):
            raise ValueError(f"{name} is an operator process; phi does not apply")
        kw["phi"] = float(phi)
    if p is not None:
        if kw["family"] in (DgpFamily.FAR_SCALAR, DgpFamily.FAR_OPERATOR):
            raise ValueError(f"{name} is autoregressive of order 1; p does not apply")
        kw["p"] = int(p)
    if burn_in is not None:
        kw["burn_in"] = int(burn_in)
    return DgpSpec(**kw)


def brownian_paths(grid: Grid, size: int, rng) -> np.ndarray:
    """``size`` independent standard Brownian paths on the grid, shape ``(size, n)``."""
    gen = _generator(rng)
    steps = np.sqrt(np.diff(grid.points, prepend=0.0))
    return np.cumsum(gen.standard_normal((size, grid.n)) * steps, axis=1)


def brownian_motion(grid: Grid, rng) -> np.ndarray:
    return brownian_paths(grid, 1, rng)[0]


def apply_operator(psi, f) -> np.ndarray:
    """Integral operator ``g(u) = int psi(u, s) f(s) ds`` by the midpoint rule.

    ``f`` may be one curve or a stack of curves (rows).
    """
    psi = np.asarray(psi, dtype=float)
    f = np.asarray(f, dtype=float)
    n = psi.shape[0]
    if psi.shape != (n, n) or f.shape[-1] != n:
        raise DimensionError(f"operator {psi.shape} and curve {f.shape} are on different grids")
    return f @ psi.T / n


def _check_contraction(spec: DgpSpec, psi: np.ndarray):
    if spec.family is DgpFamily.FAR_OPERATOR and not surface_norm(psi) < 1:
        raise ValueError(f"FAR operator kernel must have L2 norm < 1, got {surface_norm(psi):.4f}")


def simulate(spec: DgpSpec, T: int, grid: Grid, rng) -> np.ndarray:
    """Simulate ``T`` curves, returned as a ``(T, n)`` array.

    Moving-average families draw ``p`` pre-sample innovations so the
    first curve is already stationary.  Autoregressive families start from
    ``X_0 = 0`` and discard ``burn_in`` iterations.
    """
    if T < 2:
        raise InsufficientSampleError(f"need T >= 2, got {T}")
    gen = _generator(rng)
    fam = spec.family
    if fam in (DgpFamily.MA_SCALAR, DgpFamily.MA_OPERATOR):
        p = spec.p
        w = brownian_paths(grid, T + p, gen)
        lagged = np.zeros((T, grid.n))
        for j in range(1, p + 1):
            lagged += w[p - j : p - j + T]
        if fam is DgpFamily.MA_SCALAR:
            return w[p:] + spec.phi * lagged
        return w[p:] + apply_operator(spec.psi_surface(grid), lagged)

    b = spec.burn_in
    w = brownian_paths(grid, T + b, gen)
    if fam is DgpFamily.FAR_SCALAR:
        x = lfilter([1.0], [1.0, -spec.phi], w, axis=0)
        return x[b:]
    psi = spec.psi_surface(grid)
    _check_contraction(spec, psi)
    a = psi.T / grid.n
    x = np.empty_like(w)
    prev = np.zeros(grid.n)
    for i in range(T + b):
        prev = prev @ a + w[i]
        x[i] = prev
    return x[b:]


def scalar_autocov(spec: DgpSpec, tol: float = 1e-14) -> np.ndarray:
    """Autocovariance multipliers ``g_l`` (``l >= 0``) with ``gamma_l = g_l min(u, s)``."""
    if spec.family is DgpFamily.MA_SCALAR:
        a = np.r_[1.0, np.full(spec.p, spec.phi)]
        return np.array([a[: len(a) - l] @ a[l:] for l in range(len(a))])
    if spec.family is DgpFamily.FAR_SCALAR:
        phi = abs(spec.phi)
        L = 0 if phi == 0 else int(math.ceil(math.log(tol) / math.log(phi))) + 1
        return spec.phi ** np.arange(L + 1) / (1.0 - spec.phi ** 2)
    raise ValueError(f"{spec.label} has no closed-form autocovariance")


def true_weighted_lrcov(spec: DgpSpec, grid: Grid, p: int = 0) -> np.ndarray | None:
    """``C^(p) = sum_l |l|^p gamma_l`` on the grid; ``None`` for operator processes."""
    if spec.is_operator:
        return None
    # tighter tail cut: |l|^p inflates the geometric tail
    g = scalar_autocov(spec, tol=1e-20)
    lags = np.arange(len(g), dtype=float)
    weights = 2.0 * lags ** p
    weights[0] = 1.0 if p == 0 else 0.0
    return float(weights @ g) * grid.surface(np.minimum)


def true_lrcov(spec: DgpSpec, grid: Grid) -> np.ndarray | None:
    """Long-run covariance surface; ``None`` when no closed form exists."""
    return true_weighted_lrcov(spec, grid, 0)


def reference_lrcov_mc(spec: DgpSpec, grid: Grid, J: int, T_inner: int, rng) -> np.ndarray:
    """Monte Carlo long-run covariance ``(T_inner / J) sum_j Xbar_j Xbar_j^T``.

    Each ``Xbar_j`` is the mean curve of an independent sample of length
    ``T_inner``.
    """
    if J < 100 or T_inner < 100:
        raise InsufficientSampleError(f"need J, T_inner >= 100, got J={J}, T_inner={T_inner}")
    if isinstance(rng, RngStream):
        children = rng.seed_sequence().spawn(J)
    else:
        children = _generator(rng).bit_generator.seed_seq.spawn(J)
    means = np.empty((J, grid.n))
    for j, ss in enumerate(children):
        means[j] = simulate(spec, T_inner, grid, np.random.default_rng(ss)).mean(axis=0)
    return (T_inner / J) * (means.T @ means)

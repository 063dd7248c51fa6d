"""Monte Carlo harness: loss distributions per (process, kernel, setting, T).

Bandwidth settings:

1. ``h = T^(1/5)``
2. ``h = T^(1/4)``
3. plug-in, pilot window = final window, ``h1 = T^(1/5)``
4. plug-in, flat-top pilot, ``h1 = T^(1/5)``
5. plug-in, flat-top pilot, ``h1`` from :func:`adaptive_initial_bandwidth`
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from flrcov.acov import center
from flrcov.bandwidth import (
    H_MIN,
    BandwidthReport,
    adaptive_initial_bandwidth,
    default_pilot_bandwidth,
    fixed_bandwidth,
    plugin_bandwidth,
)
from flrcov.dgp import DgpSpec, RngStream, reference_lrcov_mc, simulate, true_lrcov
from flrcov.fgrid import Grid, surface_distance_sq
from flrcov.kernels import Family, KernelSpec
from flrcov.lrcov import lrcov_estimate, read_surface_csv, write_surface_csv

__all__ = [
    "SETTINGS",
    "ExperimentCell",
    "LossSummary",
    "select_bandwidth",
    "replicate",
    "run_cell",
    "summarize",
    "consistency_sweep",
    "reference_surface",
    "write_losses_csv",
    "read_losses_csv",
    "write_summary_json",
    "read_summary_json",
    "cell_summary_dict",
]

SETTINGS = (1, 2, 3, 4, 5)
LOSS_COLUMNS = ("dgp", "kernel", "setting", "T", "rep", "h_used", "loss")
# reference surfaces draw from a stream id no replication will reach
REFERENCE_STREAM = 2 ** 32
DEFAULT_REF_SIZE = 2000


@dataclass(frozen=True)
class ExperimentCell:
    dgp: DgpSpec
    kernel: KernelSpec
    setting: int
    T: int
    n: int = 100
    reps: int = 200
    seed: int = 0
    h: float | None = None
    h1: float | None = None
    h_min: float = H_MIN
    derived: bool = False
    pilot_flat_top: KernelSpec = field(default_factory=lambda: KernelSpec(Family.FLAT_TOP))

    def __post_init__(self):
        if self.setting not in SETTINGS:
            raise ValueError(f"setting must be one of {SETTINGS}, got {self.setting}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.T < 2:
            raise ValueError(f"T must be >= 2, got {self.T}")
        if self.setting == 5 and self.T < 20:
            raise ValueError("setting 5 needs T >= 20")
        if not self.kernel.finite_order and self.setting >= 3 and self.h is None:
            raise ValueError("plug-in settings need a finite-order final kernel")

    @property
    def grid(self) -> Grid:
        return Grid(self.n)


@dataclass(frozen=True)
class LossSummary:
    losses: np.ndarray
    bandwidths: np.ndarray
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean_bandwidth: float
    median_bandwidth: float

    def to_dict(self) -> dict:
        return {
            "reps": int(len(self.losses)),
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
            "mean_bandwidth": self.mean_bandwidth,
            "median_bandwidth": self.median_bandwidth,
        }


def summarize(losses, bandwidths=None) -> LossSummary:
    """Box-plot statistics (linear-interpolation quartiles) of a loss vector."""
    losses = np.asarray(losses, dtype=float)
    if losses.size == 0:
        raise ValueError("cannot summarise an empty loss vector")
    bw = np.full(losses.shape, np.nan) if bandwidths is None else np.asarray(bandwidths, float)
    qs = np.percentile(np.sort(losses), [0, 25, 50, 75, 100], method="linear")
    return LossSummary(
        losses=losses,
        bandwidths=bw,
        min=float(qs[0]),
        q1=float(qs[1]),
        median=float(qs[2]),
        q3=float(qs[3]),
        max=float(qs[4]),
        mean_bandwidth=float(np.mean(bw)),
        median_bandwidth=float(np.median(bw)),
    )


def select_bandwidth(centered: np.ndarray, cell: ExperimentCell) -> tuple[float, BandwidthReport | None]:
    """Bandwidth for one centred sample under the cell's setting."""
    if cell.h is not None:
        return float(cell.h), None
    T = centered.shape[0]
    s = cell.setting
    if s == 1:
        return fixed_bandwidth(T, 1 / 5), None
    if s == 2:
        return fixed_bandwidth(T, 1 / 4), None
    pilot = cell.kernel if s == 3 else cell.pilot_flat_top
    if cell.h1 is not None:
        h1 = cell.h1
    elif s == 5:
        h1 = adaptive_initial_bandwidth(centered, centered=True)
    else:
        h1 = default_pilot_bandwidth(T)
    report = plugin_bandwidth(
        centered, pilot, h1, cell.kernel, h_min=cell.h_min, derived=cell.derived, centered=True
    )
    return report.h_opt_hat, report


def replicate(cell: ExperimentCell, reference: np.ndarray, stream_id: int) -> tuple[float, float]:
    """One replication: returns ``(h_used, loss)``."""
    x = simulate(cell.dgp, cell.T, cell.grid, RngStream(cell.seed, stream_id))
    c = center(x)
    h, _ = select_bandwidth(c, cell)
    est = lrcov_estimate(c, cell.kernel, h)
    return h, surface_distance_sq(est.surface, reference)


def run_cell(cell: ExperimentCell, reference, *, threads: int = 1, stream_ids=None) -> LossSummary:
    """Run every replication of a cell against a reference surface.

    Replication ``r`` draws from ``RngStream(cell.seed, stream_ids[r])``
    (default ``stream_ids = range(reps)``), so results do not depend on
    scheduling or thread count.
    """
    reference = np.asarray(reference, dtype=float)
    if reference.shape != (cell.n, cell.n):
        raise ValueError(f"reference shape {reference.shape} does not match grid n={cell.n}")
    ids = list(range(cell.reps)) if stream_ids is None else list(stream_ids)

    def job(sid):
        return replicate(cell, reference, sid)

    if threads > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(job, ids))
    else:
        out = [job(sid) for sid in ids]
    hs, losses = zip(*out)
    return summarize(losses, hs)


def _cache_dir() -> Path:
    env = os.environ.get("FLRCOV_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "flrcov"


def reference_surface(
    dgp: DgpSpec,
    grid: Grid,
    *,
    J: int = DEFAULT_REF_SIZE,
    T_inner: int = DEFAULT_REF_SIZE,
    seed: int = 0,
    cache_dir=None,
) -> np.ndarray:
    """True long-run covariance, or a cached Monte Carlo stand-in.

    Operator processes have no closed form; their surface comes from
    :func:`~flrcov.dgp.reference_lrcov_mc` and is cached as CSV under
    ``cache_dir`` (default ``$FLRCOV_CACHE_DIR`` or ``~/.cache/flrcov``).
    """
    exact = true_lrcov(dgp, grid)
    if exact is not None:
        return exact
    cache = Path(cache_dir) if cache_dir is not None else _cache_dir()
    path = cache / f"ref_{dgp.label}_n{grid.n}_J{J}_T{T_inner}_s{seed}.csv"
    if path.exists():
        return read_surface_csv(path)
    surface = reference_lrcov_mc(dgp, grid, J, T_inner, RngStream(seed, REFERENCE_STREAM))
    cache.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    write_surface_csv(tmp, surface)
    tmp.replace(path)
    # reread so cached and fresh runs see identical values
    return read_surface_csv(path)


def consistency_sweep(
    dgp: DgpSpec,
    kernel: KernelSpec,
    setting: int,
    Ts,
    reps: int,
    seed: int,
    *,
    n: int = 100,
    threads: int = 1,
    reference=None,
    **cell_options,
) -> list[tuple[int, LossSummary]]:
    """Median loss (and full summaries) over increasing sample sizes."""
    Ts = [int(t) for t in Ts]
    if any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise ValueError(f"Ts must be strictly increasing, got {Ts}")
    grid = Grid(n)
    ref = reference_surface(dgp, grid, seed=seed) if reference is None else reference
    table = []
    for T in Ts:
        cell = ExperimentCell(dgp, kernel, setting, T, n=n, reps=reps, seed=seed, **cell_options)
        table.append((T, run_cell(cell, ref, threads=threads)))
    return table


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_losses_csv(path, rows) -> Path:
    """``rows`` is an iterable of ``(cell, summary)`` pairs."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOSS_COLUMNS)
        for cell, summary in rows:
            for rep, (h, loss) in enumerate(zip(summary.bandwidths, summary.losses)):
                w.writerow(
                    [cell.dgp.label, cell.kernel.name, cell.setting, cell.T, rep, _fmt(h), _fmt(loss)]
                )
    return path


def read_losses_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r["setting"] = int(r["setting"])
        r["T"] = int(r["T"])
        r["rep"] = int(r["rep"])
        r["h_used"] = float(r["h_used"])
        r["loss"] = float(r["loss"])
    return rows


def cell_summary_dict(cell: ExperimentCell, summary: LossSummary) -> dict:
    d = {
        "dgp": cell.dgp.to_dict(),
        "kernel": cell.kernel.to_dict(),
        "setting": cell.setting,
        "T": cell.T,
        "n": cell.n,
        "seed": cell.seed,
    }
    d.update(summary.to_dict())
    return d


def write_summary_json(path, cell: ExperimentCell, summary: LossSummary) -> Path:
    path = Path(path)
    path.write_text(json.dumps(cell_summary_dict(cell, summary), indent=2, sort_keys=True) + "\n")
    return path


def read_summary_json(path) -> dict:
    return json.loads(Path(path).read_text())

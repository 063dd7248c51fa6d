"""Command-line entry point.

Modes:

``estimate``    read a header-less ``T x n`` CSV sample, pick a bandwidth
                with the chosen setting and write ``lrcov.csv`` and
                ``bandwidth.json``
``experiment``  run one Monte Carlo cell, write ``losses.csv`` and
                ``summary.json``
``sweep``       run one cell per ``--T`` value, write ``losses.csv``,
                ``sweep.csv`` and one ``summary_T<T>.json`` per size

Options may also come from a JSON file passed with ``--config``; flags
given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from flrcov import mc
from flrcov.acov import center
from flrcov.bandwidth import H_MIN
from flrcov.dgp import DEFAULT_BURN_IN, DGP_NAMES, get_dgp
from flrcov.fgrid import as_sample
from flrcov.kernels import KERNEL_NAMES, Family, KernelSpec, get_kernel
from flrcov.lrcov import lrcov_estimate, write_surface_csv

MODES = ("estimate", "experiment", "sweep")


def _int_list(text) -> tuple[int, ...]:
    if isinstance(text, int):
        return (text,)
    if isinstance(text, (list, tuple)):
        return tuple(int(t) for t in text)
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive_float(text) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="flrcov",
        description="Long-run covariance estimation for functional time series "
        "with plug-in bandwidth selection.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--config", help="JSON file of option values (flags override it)")
    p.add_argument("--mode", choices=MODES, default="experiment", help="what to run")
    p.add_argument("--dgp", choices=DGP_NAMES, default="far1", help="data generating process")
    p.add_argument("--kernel", choices=KERNEL_NAMES, default="bartlett", help="final weight function")
    p.add_argument("--setting", type=int, choices=mc.SETTINGS, default=4, help="bandwidth setting")
    p.add_argument("--T", type=_int_list, default=(100,),
                   help="sample size; comma-separated list in sweep mode")
    p.add_argument("--n", type=int, default=100, help="grid points on [0, 1]")
    p.add_argument("--reps", type=int, default=200, help="Monte Carlo replications per cell")
    p.add_argument("--seed", type=int, default=0, help="master random seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")
    p.add_argument("--h", type=_positive_float, default=None, help="force this bandwidth")
    p.add_argument("--h1", type=_positive_float, default=None,
                   help="pilot bandwidth (default T^(1/5), adaptive under setting 5)")
    p.add_argument("--k1", type=_positive_float, default=0.5, help="flat-top plateau end")
    p.add_argument("--k2", type=_positive_float, default=1.0, help="flat-top support end")
    p.add_argument("--h-min", type=_positive_float, default=H_MIN, help="floor on the plug-in bandwidth")
    p.add_argument("--c0-derived", action="store_true",
                   help="use the constant 2 q w^2 ||C^(q)||^2 in c0")
    p.add_argument("--phi", type=float, default=None, help="override the process coefficient")
    p.add_argument("--p", type=int, default=None, help="override the moving-average order")
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN, help="FAR burn-in iterations")
    p.add_argument("--ref-J", type=int, default=mc.DEFAULT_REF_SIZE,
                   help="independent samples for the Monte Carlo reference surface")
    p.add_argument("--ref-T-inner", type=int, default=mc.DEFAULT_REF_SIZE,
                   help="length of each reference sample")
    p.add_argument("--in", dest="input", default=None, help="sample CSV for estimate mode")
    p.add_argument("--out", default="flrcov-out", help="output directory")
    return p


@dataclass(frozen=True)
class RunConfig:
    mode: str
    dgp: str
    kernel: str
    setting: int
    T: tuple
    n: int
    reps: int
    seed: int
    threads: int
    h: float | None
    h1: float | None
    k1: float
    k2: float
    h_min: float
    c0_derived: bool
    phi: float | None
    p: int | None
    burn_in: int
    ref_J: int
    ref_T_inner: int
    input: str | None
    out: str


def _config_defaults(parser: argparse.ArgumentParser, path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {path}: {exc}")
    if not isinstance(raw, dict):
        parser.error(f"config {path} must hold a JSON object")
    actions = {}
    for a in parser._actions:
        if a.dest in ("help", "config"):
            continue
        actions[a.dest] = a
        for opt in a.option_strings:
            actions[opt.lstrip("-")] = a
    out = {}
    for key, value in raw.items():
        action = actions.get(key) or actions.get(key.replace("_", "-"))
        if action is None:
            parser.error(f"unknown config key {key!r}")
        try:
            if isinstance(action, argparse._StoreTrueAction):
                if not isinstance(value, bool):
                    raise ValueError("expected true or false")
            elif value is not None and action.type is not None:
                value = action.type(value if action.type is _int_list else str(value))
            if action.choices is not None and value not in action.choices:
                raise ValueError(f"must be one of {list(action.choices)}")
        except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
            parser.error(f"bad value for config key {key!r}: {exc}")
        out[action.dest] = value
    return out


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        parser.set_defaults(**_config_defaults(parser, pre.config))
    ns = parser.parse_args(argv)
    d = vars(ns)
    d.pop("config")
    d["T"] = tuple(d["T"])
    if not d["T"]:
        parser.error("--T needs at least one value")
    if d["mode"] == "experiment" and len(d["T"]) != 1:
        parser.error("--T takes a single value in experiment mode")
    if d["mode"] == "estimate" and not d["input"]:
        parser.error("--in is required in estimate mode")
    for key in ("n", "reps", "threads", "ref_J", "ref_T_inner"):
        if d[key] < 1:
            parser.error(f"--{key.replace('_', '-')} must be positive")
    if d["burn_in"] < 0:
        parser.error("--burn-in must be nonnegative")
    if not d["k1"] < d["k2"]:
        parser.error("--k1 must be smaller than --k2")
    return RunConfig(**d)


def read_sample_csv(path) -> np.ndarray:
    """Header-less CSV, one curve per row, values on the midpoint grid."""
    return as_sample(np.loadtxt(path, delimiter=",", ndmin=2))


def _cell(cfg: RunConfig, T: int) -> mc.ExperimentCell:
    return mc.ExperimentCell(
        dgp=get_dgp(cfg.dgp, phi=cfg.phi, p=cfg.p, burn_in=cfg.burn_in),
        kernel=get_kernel(cfg.kernel, cfg.k1, cfg.k2),
        setting=cfg.setting,
        T=T,
        n=cfg.n,
        reps=cfg.reps,
        seed=cfg.seed,
        h=cfg.h,
        h1=cfg.h1,
        h_min=cfg.h_min,
        derived=cfg.c0_derived,
        pilot_flat_top=KernelSpec(Family.FLAT_TOP, cfg.k1, cfg.k2),
    )


def _reference(cfg: RunConfig, cell: mc.ExperimentCell) -> np.ndarray:
    return mc.reference_surface(
        cell.dgp, cell.grid, J=cfg.ref_J, T_inner=cfg.ref_T_inner, seed=cfg.seed
    )


def run_estimate(cfg: RunConfig, out: Path) -> list[Path]:
    x = read_sample_csv(cfg.input)
    c = center(x)
    T, n = c.shape
    cell = _cell(cfg, T)
    h, report = mc.select_bandwidth(c, cell)
    est = lrcov_estimate(c, cell.kernel, h)
    surface_path = write_surface_csv(out / "lrcov.csv", est.surface)
    info = {
        "setting": cfg.setting,
        "kernel": cell.kernel.to_dict(),
        "T": T,
        "n": n,
        "h_used": h,
        "lag_cap": est.lag_cap,
        "min_eigenvalue": float(est.eigenvalues()[0]),
        "report": None if report is None else report.to_dict(),
    }
    report_path = out / "bandwidth.json"
    report_path.write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    return [surface_path, report_path]


def run_experiment(cfg: RunConfig, out: Path) -> list[Path]:
    cell = _cell(cfg, cfg.T[0])
    summary = mc.run_cell(cell, _reference(cfg, cell), threads=cfg.threads)
    return [
        mc.write_losses_csv(out / "losses.csv", [(cell, summary)]),
        mc.write_summary_json(out / "summary.json", cell, summary),
    ]


def run_sweep(cfg: RunConfig, out: Path) -> list[Path]:
    first = _cell(cfg, cfg.T[0])
    table = mc.consistency_sweep(
        first.dgp,
        first.kernel,
        cfg.setting,
        cfg.T,
        cfg.reps,
        cfg.seed,
        n=cfg.n,
        threads=cfg.threads,
        reference=_reference(cfg, first),
        h=cfg.h,
        h1=cfg.h1,
        h_min=cfg.h_min,
        derived=cfg.c0_derived,
        pilot_flat_top=first.pilot_flat_top,
    )
    rows = [(_cell(cfg, T), s) for T, s in table]
    paths = [mc.write_losses_csv(out / "losses.csv", rows)]
    sweep_path = out / "sweep.csv"
    with sweep_path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["T", "median_loss", "median_bandwidth"])
        for T, s in table:
            w.writerow([T, "%.17g" % s.median, "%.17g" % s.median_bandwidth])
    paths.append(sweep_path)
    for cell, s in rows:
        paths.append(mc.write_summary_json(out / f"summary_T{cell.T}.json", cell, s))
    return paths


def run(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        runner = {"estimate": run_estimate, "experiment": run_experiment, "sweep": run_sweep}
        paths = runner[cfg.mode](cfg, out)
    except Exception as exc:  # noqa: BLE001 - reported as one diagnostic line
        print(f"flrcov: error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())

"""Parameter sweeps, result persistence and plot-data emission.

A sweep evaluates one task over the Cartesian grid of its axes with a
process pool.  Grid points are independent; results are gathered and
written in grid order regardless of completion order, so reruns and
different worker counts produce byte-identical CSVs.  Failures of single
points are recorded in the manifest and do not abort the sweep.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ValidationError
from .params import (SubsystemSpec, TeePartition, QuenchConfig,
                     lattice, make_params, named_state, PI4)
from . import entanglement, gaussian, spectral

TASKS = {}


def _task(name):
    def deco(fn):
        TASKS[name] = fn
        return fn
    return deco


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple          # ((name, start, stop, count), ...)
    fixed: dict
    task: str
    workers: int = 1

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValidationError(f"unknown task {self.task!r}; "
                                  f"available: {sorted(TASKS)}")
        names = [a[0] for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("sweep axes must be distinct")
        if set(names) & set(self.fixed):
            raise ValidationError("axis parameters may not also be fixed")
        for name, start, stop, count in self.axes:
            if count < 1:
                raise ValidationError(f"axis {name}: count must be >= 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    def grid(self):
        """Yield (index, config) over the grid in row-major order."""
        axes_vals = [np.linspace(start, stop, count)
                     for _, start, stop, count in self.axes]
        names = [a[0] for a in self.axes]
        shape = [len(v) for v in axes_vals]
        total = int(np.prod(shape)) if shape else 1
        for flat in range(total):
            cfg = dict(self.fixed)
            rem = flat
            for dim in reversed(range(len(shape))):
                rem, pos = divmod(rem, shape[dim])
                cfg[names[dim]] = float(axes_vals[dim][pos])
            yield flat, cfg


# --------------------------------------------------------------------------
# tasks: each maps a point config to a list of row dicts
# --------------------------------------------------------------------------

def _point_params(cfg):
    return make_params(cfg.get("alpha_J", cfg.get("alpha", 0.0)),
                       cfg.get("beta_J", 0.0),
                       cfg.get("alpha_h", cfg.get("alpha", 0.0)),
                       cfg.get("beta_h", 0.0),
                       units=cfg.get("units", "pi4"))


@_task("spectrum")
def task_spectrum(cfg):
    params = _point_params(cfg)
    L = int(cfg.get("L", 40))
    census = spectral.count_real_modes(params, L)
    obc = spectral.detect_edge_modes(
        params, lattice(L, "obc"),
        tol_edge=cfg.get("tol_edge", 1e-3), im_tol=cfg.get("im_tol", 1e-2))
    label = spectral.classify_phase_from_spectrum(obc, census)
    rows = []
    for i, rec in enumerate(obc.edge_modes):
        rows.append({"mode_index": i, "kind": rec.kind,
                     "re_eps": rec.energy.real, "im_eps": rec.energy.imag,
                     "abs_eps": abs(rec.energy),
                     "loc_len": rec.localization_length,
                     "phase": str(label), "n_real_modes": census.count})
    if not rows:
        rows.append({"mode_index": -1, "kind": "none", "re_eps": 0.0,
                     "im_eps": 0.0, "abs_eps": 0.0, "loc_len": 0.0,
                     "phase": str(label), "n_real_modes": census.count})
    return rows


@_task("evolve")
def task_evolve(cfg):
    params = _point_params(cfg)
    lat = lattice(int(cfg.get("L", 100)), cfg.get("bc", "pbc-even"))
    state = named_state(cfg.get("initial_state", "neel-fermion"), lat.L,
                        seed=cfg.get("seed"))
    quench = QuenchConfig(state, n_periods=int(cfg.get("n_periods", 200)))
    sub = SubsystemSpec(int(cfg.get("subsystem_start", 1)),
                        int(cfg.get("subsystem_length", max(2, lat.L // 10))))
    trace = gaussian.stroboscopic_run(params, lat, quench, sub)
    return [{"period": int(p), "S_A": s, "norm_log": nl, "purity_residual": pr}
            for p, s, nl, pr in zip(trace.periods, trace.entropy,
                                    trace.norm_log, trace.purity_residual)]


@_task("steady-entropy")
def task_steady_entropy(cfg):
    """Steady-state density and early growth rate of one parameter point."""
    params = _point_params(cfg)
    lat = lattice(int(cfg.get("L", 120)), cfg.get("bc", "pbc-even"))
    la = int(cfg.get("subsystem_length", lat.L // 10))
    state = named_state(cfg.get("initial_state", "neel-fermion"), lat.L)
    quench = QuenchConfig(state, n_periods=int(cfg.get("n_periods", 300)))
    trace = gaussian.stroboscopic_run(params, lat, quench, SubsystemSpec(1, la))
    horizon = max(1, la // 2)
    return [{"L": lat.L, "L_A": la,
             "S_A": trace.steady_state(),
             "density": trace.steady_state() / la,
             "growth_rate": trace.growth_rate(horizon)}]


@_task("tee")
def task_tee(cfg):
    params = _point_params(cfg)
    L = int(cfg.get("L", 48))
    lat = lattice(L, "obc")
    state = named_state(cfg.get("initial_state", "neel-fermion"), L)
    quench = QuenchConfig(state, n_periods=int(cfg.get("n_periods", 300)))
    frames = []
    gaussian.stroboscopic_run(params, lat, quench, SubsystemSpec(1, max(2, L // 4)),
                              entropy_stride=quench.n_periods, frame_out=frames)
    corr = gaussian.correlation_from_frame(frames[0])
    result = entanglement.tee(corr, TeePartition.quarters(L), lat)
    return [{"L": L, "beta_J": cfg.get("beta_J", 0.0), "S_top": result.s_top}]


@_task("spin-quench")
def task_spin_quench(cfg):
    from . import ed
    params = _point_params(cfg)
    lat = lattice(int(cfg.get("L", 12)), cfg.get("bc", "obc"))
    state = named_state(cfg.get("initial_state", "x-down"), lat.L,
                        seed=cfg.get("seed"))
    K = cfg.get("K", 0.0)
    if cfg.get("units", "pi4") == "pi4":
        K = K * PI4
    quench = QuenchConfig(state, n_periods=int(cfg.get("n_periods", 100)), K=K)
    trace = ed.quench_experiment(params, lat, quench)
    rows = []
    for t in range(trace.n_periods):
        for j in range(lat.L):
            rows.append({"period": t + 1, "site": j + 1, "Sx": trace.sx[t, j]})
    return rows


def run_point(task_name: str, cfg: dict):
    return TASKS[task_name](cfg)


def _pool_entry(args):
    index, task_name, cfg = args
    try:
        return index, "ok", run_point(task_name, cfg), None
    except Exception as exc:  # fail-soft: record and continue
        return index, "error", [], f"{type(exc).__name__}: {exc}"


# --------------------------------------------------------------------------
# manifest and CSV output
# --------------------------------------------------------------------------

@dataclass
class RunManifest:
    version: str
    spec: dict
    seed: int | None
    wallclock_s: float
    points: list
    outputs: dict

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def write_csv(path: Path, rows: list[dict], fieldnames=None):
    if not rows:
        raise ValidationError("no rows to write")
    fieldnames = fieldnames or list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row.get(k)) for k in fieldnames})


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, (np.floating,)):
        return format(float(v), ".12g")
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def run_sweep(spec: SweepSpec, out_dir, seed=None) -> RunManifest:
    """Execute the sweep, writing <task>_sweep.csv and manifest.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    jobs = [(idx, spec.task, dict(cfg, seed=seed) if seed is not None else cfg)
            for idx, cfg in spec.grid()]
    results = {}
    if spec.workers == 1:
        for job in jobs:
            results[job[0]] = _pool_entry(job)
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            for res in pool.map(_pool_entry, jobs):
                results[res[0]] = res

    axis_names = [a[0] for a in spec.axes]
    rows, points = [], []
    for idx, cfg in spec.grid():
        _, status, point_rows, err = results[idx]
        points.append({"index": idx, "status": status,
                       **({"error": err} if err else {})})
        for row in point_rows:
            rows.append({"grid_index": idx,
                         **{n: cfg[n] for n in axis_names}, **row})

    csv_path = out_dir / f"{spec.task}_sweep.csv"
    if rows:
        write_csv(csv_path, rows)
    outputs = {csv_path.name: _sha256(csv_path)} if rows else {}
    manifest = RunManifest(
        version=__version__,
        spec={"axes": [list(a) for a in spec.axes], "fixed": spec.fixed,
              "task": spec.task, "workers": spec.workers},
        seed=seed,
        wallclock_s=time.time() - t0,
        points=points,
        outputs=outputs,
    )
    (out_dir / "manifest.json").write_text(manifest.to_json())
    return manifest


# --------------------------------------------------------------------------
# figure bundles
# --------------------------------------------------------------------------

def _read_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _require_columns(rows, cols, path):
    missing = [c for c in cols if rows and c not in rows[0]]
    if missing:
        raise ValidationError(f"{path}: missing column(s) {', '.join(missing)}")


def emit_plot_data(figure: str, inputs: list, out_dir) -> Path:
    """Write a tidy per-figure CSV from raw sweep/run outputs (no rendering)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [Path(p) for p in inputs]
    for p in paths:
        if not p.exists():
            raise ValidationError(f"input file not found: {p}")

    if figure == "fig2":
        rows = []
        for p in paths:
            data = _read_csv(p)
            _require_columns(data, ["alpha", "mode_index", "abs_eps"], p)
            for r in data:
                if int(r["mode_index"]) >= 0:
                    rows.append({"alpha": r["alpha"], "mode_index": r["mode_index"],
                                 "abs_eps": r["abs_eps"]})
        out = out_dir / "fig2_edge_spectrum.csv"
        write_csv(out, rows, ["alpha", "mode_index", "abs_eps"])
        return out

    if figure == "fig3":
        rows = []
        for p in paths:
            data = _read_csv(p)
            _require_columns(data, ["period", "S_A", "beta_J"], p)
            for r in data:
                rows.append({"period": r["period"], "S_A": r["S_A"],
                             "series": r["beta_J"]})
        out = out_dir / "fig3_entropy_evolution.csv"
        write_csv(out, rows, ["period", "S_A", "series"])
        return out

    if figure == "fig6":
        data = []
        for p in paths:
            part = _read_csv(p)
            _require_columns(part, ["L", "beta_J", "S_top"], p)
            data.extend(part)
        curves = {}
        for r in data:
            curves.setdefault(int(float(r["L"])), []).append(
                (float(r["beta_J"]), float(r["S_top"])))
        curve_map = {}
        for L, pts in curves.items():
            pts.sort()
            curve_map[L] = (np.array([x for x, _ in pts]),
                            np.array([y for _, y in pts]))
        fit = entanglement.tee_collapse(curve_map)
        rows = []
        for r in data:
            L = int(float(r["L"]))
            bj = float(r["beta_J"])
            rows.append({"beta_J": bj, "S_top": r["S_top"], "L": L,
                         "x_collapsed": (bj - fit.beta_J0) * L ** fit.nu})
        out = out_dir / "fig6_tee_collapse.csv"
        write_csv(out, rows, ["beta_J", "S_top", "L", "x_collapsed"])
        return out

    raise ValidationError(f"unknown figure id {figure!r}; "
                          "supported: fig2, fig3, fig6")

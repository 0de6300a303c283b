"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 numerical breakdown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, cft, ed, entanglement, gaussian, spectral, sweep
from .errors import NumericalBreakdown, ValidationError
from .params import (QuenchConfig, SubsystemSpec, lattice, make_params,
                     model_from_config, named_state, parse_config)


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        cfg = parse_config(Path(args.config).read_text())
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    return cfg


def _out_dir(args) -> Path:
    d = Path(getattr(args, "out_dir", None) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


# --------------------------------------------------------------------------

def cmd_spectrum(args):
    cfg = _load_config(args)
    units = args.units or cfg.get("units", "pi4")
    alpha = args.alpha if args.alpha is not None else cfg.get("alpha_J", 0.5)
    beta_j = args.beta_j if args.beta_j is not None else cfg.get("beta_J", 0.0)
    beta_h = args.beta_h if args.beta_h is not None else cfg.get("beta_h", 0.0)
    L = args.L or cfg.get("L", 40)
    bc = args.bc or cfg.get("bc", "obc")
    params = make_params(alpha, beta_j, alpha, beta_h, units=units)
    lat = lattice(L, bc)

    rows = []
    if lat.bc.periodic:
        for k in spectral.allowed_momenta(lat):
            pt = spectral.floquet_dispersion(params.J, params.h, k)
            for eps in pt.epsilon:
                rows.append({"k_or_index": k, "re_eps": eps.real,
                             "im_eps": eps.imag,
                             "classification": pt.classification})
        report = None
        census = spectral.count_real_modes(params, lat.L)
        n_real, edge_modes = census.count, []
        label = None
    else:
        report = spectral.detect_edge_modes(params, lat, tol_edge=args.tol_edge,
                                            im_tol=args.im_tol)
        for i, eps in enumerate(report.quasienergies):
            cls = spectral.ModeClass.REAL if abs(eps.imag) < args.tol_real \
                else spectral.ModeClass.GROW_DECAY
            rows.append({"k_or_index": i, "re_eps": eps.real,
                         "im_eps": eps.imag, "classification": cls})
        census = spectral.count_real_modes(params, lat.L)
        n_real, edge_modes = report.n_real_modes, report.edge_modes
        label = spectral.classify_phase_from_spectrum(report, census)

    out = _out_dir(args)
    csv_path = out / (args.out or "spectrum.csv")
    sweep.write_csv(csv_path, rows, ["k_or_index", "re_eps", "im_eps",
                                     "classification"])
    summary = {
        "n_real_modes": int(n_real),
        "edge_modes": [{"kind": m.kind, "re": m.energy.real,
                        "im": m.energy.imag, "loc_len": m.localization_length}
                       for m in edge_modes],
        "phase": str(label) if label is not None else None,
    }
    (out / "spectrum_summary.json").write_text(json.dumps(summary, indent=2))
    print(f"wrote {csv_path} and spectrum_summary.json")
    return 0


def cmd_evolve(args):
    cfg = _load_config(args)
    params, lat, quench = model_from_config(cfg)
    sub = SubsystemSpec(cfg.get("subsystem_start", 1),
                        cfg.get("subsystem_length", max(2, lat.L // 10)))
    dump_dir = Path(args.dump_correlations) if args.dump_correlations else None
    frames = [] if dump_dir else None

    if dump_dir:
        dump_dir.mkdir(parents=True, exist_ok=True)
        w1, w2 = spectral.build_kick_forms(params, lat)
        tm = spectral.build_transfer_matrix(w1, w2)
        frame = gaussian.initial_frame(quench, lat)
        rows, files = [], []
        idx = sub.majorana_indices(lat)
        for t in range(1, quench.n_periods + 1):
            frame = gaussian.period_map(frame, tm)
            corr = gaussian.correlation_from_frame(frame)
            rep = entanglement.entropy_from_majorana_block(
                corr.c[np.ix_(idx, idx)])
            rows.append({"period": t, "S_A": rep.entropy,
                         "norm_log": frame.norm_log,
                         "purity_residual": corr.purity_defect()})
            fname = f"correlations_{t:05d}.bin"
            corr.c.astype("<c16").tofile(dump_dir / fname)
            files.append(fname)
        sidecar = {"dtype": "complex128", "byte_order": "little-endian",
                   "layout": "row-major", "shape": [2 * lat.L, 2 * lat.L],
                   "files": files}
        (dump_dir / "correlations.json").write_text(json.dumps(sidecar, indent=2))
    else:
        trace = gaussian.stroboscopic_run(params, lat, quench, sub)
        rows = [{"period": int(p), "S_A": s, "norm_log": nl,
                 "purity_residual": pr}
                for p, s, nl, pr in zip(trace.periods, trace.entropy,
                                        trace.norm_log, trace.purity_residual)]

    csv_path = _out_dir(args) / (args.out or "evolve.csv")
    sweep.write_csv(csv_path, rows, ["period", "S_A", "norm_log",
                                     "purity_residual"])
    print(f"wrote {csv_path}")
    return 0


def cmd_scaling(args):
    cfg = _load_config(args)
    params, _, quench0 = model_from_config(cfg)
    ratio = cfg.get("scaling_ratio", 10)
    sizes = [int(s) for s in str(cfg.get("scaling_sizes", "60,100,140,200")).split(",")]
    points = []
    for L in sizes:
        lat = lattice(L, cfg.get("bc", "pbc-even"))
        la = max(2, L // ratio)
        state = named_state(cfg.get("initial_state", "neel-fermion"), L)
        quench = QuenchConfig(state, n_periods=quench0.n_periods)
        trace = gaussian.stroboscopic_run(params, lat, quench,
                                          SubsystemSpec(1, la))
        points.append((L, la, trace.steady_state()))
    fit = entanglement.fit_scaling(points)
    out = _out_dir(args)
    csv_path = out / (args.out or "scaling.csv")
    sweep.write_csv(csv_path, [{"L": L, "L_A": la, "S_A": s}
                               for L, la, s in points], ["L", "L_A", "S_A"])
    (out / "scaling_fit.json").write_text(json.dumps(
        {"a": fit.a, "b": fit.b, "residual": fit.residual, "law": fit.law},
        indent=2))
    print(f"wrote {csv_path} and scaling_fit.json (law={fit.law})")
    return 0


def cmd_tee(args):
    cfg = _load_config(args)
    sizes = [int(s) for s in str(cfg.get("tee_sizes", "32,48,64")).split(",")]
    bj_spec = str(cfg.get("tee_beta_j", "-0.55,-0.05,11")).split(",")
    betas = np.linspace(float(bj_spec[0]), float(bj_spec[1]), int(bj_spec[2]))
    rows = []
    curves = {}
    for L in sizes:
        vals = []
        for bj in betas:
            point = dict(cfg, L=L, beta_J=float(bj))
            vals.append(sweep.task_tee(point)[0]["S_top"])
            rows.append({"L": L, "beta_J": float(bj), "S_top": vals[-1]})
        curves[L] = (betas.copy(), np.array(vals))
    fit = entanglement.tee_collapse(curves)
    out = _out_dir(args)
    csv_path = out / (args.out or "tee.csv")
    sweep.write_csv(csv_path, rows, ["L", "beta_J", "S_top"])
    (out / "tee_collapse.json").write_text(json.dumps(
        {"beta_J0": fit.beta_J0, "nu": fit.nu, "residual": fit.collapse_residual},
        indent=2))
    print(f"wrote {csv_path} and tee_collapse.json")
    return 0


def cmd_spin_quench(args):
    cfg = _load_config(args)
    params, lat, quench = model_from_config(cfg)
    trace = ed.quench_experiment(params, lat, quench)
    rows = [{"period": t + 1, "site": j + 1, "Sx": trace.sx[t, j]}
            for t in range(trace.n_periods) for j in range(lat.L)]
    out = _out_dir(args)
    csv_path = out / (args.out or "spin_quench.csv")
    sweep.write_csv(csv_path, rows, ["period", "site", "Sx"])
    summary = [{"period": t + 1, "SxSx_edge": trace.sx_edge_corr[t],
                "ghz_overlap": trace.ghz[t]} for t in range(trace.n_periods)]
    sweep.write_csv(out / "spin_quench_summary.csv", summary,
                    ["period", "SxSx_edge", "ghz_overlap"])
    print(f"wrote {csv_path} and spin_quench_summary.csv")
    return 0


def cmd_cft_compare(args):
    pars = cft.CftParams(c=args.c, epsilon=args.epsilon, eta_rot=args.eta,
                         l=args.l)
    t_grid = np.linspace(0.05, args.t_max, args.n_times)
    curve = cft.entropy_curve(pars, t_grid)

    la = int(round(args.l))
    L = 10 * la
    lat = lattice(L, "pbc-even")
    params = make_params(args.amplitude, -args.amplitude * args.eta,
                         args.amplitude, -args.amplitude * args.eta,
                         units="rad")
    hmat = gaussian.continuous_hamiltonian(params, lat)
    frame = gaussian.initial_frame(named_state("neel-fermion", L), lat)
    c0 = gaussian.correlation_from_frame(frame)
    sub = SubsystemSpec(1, la)
    states = gaussian.evolve_continuous(c0, hmat, t_grid, rtol=args.rtol)
    idx = sub.majorana_indices(lat)
    s_num = np.array([entanglement.entropy_from_majorana_block(
        cm.c[np.ix_(idx, idx)]).entropy for cm in states])
    s_num -= s_num[0]

    rows = [{"t": float(t), "S_cft": float(sc), "S_numeric": float(sn),
             "valid": int(v)}
            for t, sc, sn, v in zip(t_grid, curve.entropy, s_num, curve.validity)]
    csv_path = _out_dir(args) / (args.out or "cft_compare.csv")
    sweep.write_csv(csv_path, rows, ["t", "S_cft", "S_numeric", "valid"])
    report = cft.compare_to_numerics(curve, t_grid, s_num)
    print(f"wrote {csv_path}; peak-time ratio "
          f"{report.peak_time_ratio:.3f}, rms {report.rms_deviation:.4f}")
    return 0


def cmd_sweep(args):
    cfg = _load_config(args)
    axes = []
    for spec in args.axis or []:
        name, start, stop, count = spec.split(":")
        axes.append((name, float(start), float(stop), int(count)))
    if not axes:
        raise ValidationError("sweep needs at least one --axis name:start:stop:count")
    spec = sweep.SweepSpec(tuple(axes), cfg, args.task, workers=args.workers)
    manifest = sweep.run_sweep(spec, _out_dir(args), seed=args.seed)
    n_err = sum(1 for p in manifest.points if p["status"] != "ok")
    print(f"sweep complete: {len(manifest.points)} points, {n_err} failures")
    return 0


def cmd_emit_plots(args):
    out = sweep.emit_plot_data(args.figure, args.inputs, _out_dir(args))
    print(f"wrote {out}")
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="floquet-ising",
        description="Nonunitary Floquet transverse-field Ising toolkit")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out-dir", help="output directory (default: cwd)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="quasienergy spectrum and phase label")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta-j", type=float)
    sp.add_argument("--beta-h", type=float)
    sp.add_argument("--L", type=int)
    sp.add_argument("--bc", choices=["pbc-even", "pbc-odd", "obc"])
    sp.add_argument("--units", choices=["pi4", "rad"])
    sp.add_argument("--tol-real", type=float, default=1e-8)
    sp.add_argument("--tol-edge", type=float, default=1e-3)
    sp.add_argument("--im-tol", type=float, default=1e-2)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)

    ev = sub.add_parser("evolve", help="stroboscopic Gaussian evolution")
    ev.add_argument("--out")
    ev.add_argument("--dump-correlations", metavar="DIR")
    ev.set_defaults(func=cmd_evolve)

    sc = sub.add_parser("scaling", help="steady-state entropy scaling fit")
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scaling)

    te = sub.add_parser("tee", help="topological entanglement entropy sweep")
    te.add_argument("--out")
    te.set_defaults(func=cmd_tee)

    sq = sub.add_parser("spin-quench", help="dense spin-language quench")
    sq.add_argument("--out")
    sq.set_defaults(func=cmd_spin_quench)

    cc = sub.add_parser("cft-compare", help="complex-time CFT vs numerics")
    cc.add_argument("--c", type=float, default=0.5)
    cc.add_argument("--epsilon", type=float, default=0.185)
    cc.add_argument("--eta", type=float, default=0.1)
    cc.add_argument("--l", type=float, default=10.0)
    cc.add_argument("--t-max", type=float, default=15.0)
    cc.add_argument("--n-times", type=int, default=60)
    cc.add_argument("--amplitude", type=float, default=0.5,
                    help="coupling scale; 0.5 gives unit front velocity")
    cc.add_argument("--rtol", type=float, default=1e-9)
    cc.add_argument("--out")
    cc.set_defaults(func=cmd_cft_compare)

    sw = sub.add_parser("sweep", help="parameter sweep of any task")
    sw.add_argument("--task", required=True, choices=sorted(sweep.TASKS))
    sw.add_argument("--axis", action="append",
                    metavar="name:start:stop:count")
    sw.set_defaults(func=cmd_sweep)

    ep = sub.add_parser("emit-plots", help="tidy per-figure CSV bundles")
    ep.add_argument("--figure", required=True)
    ep.add_argument("--inputs", nargs="+", required=True)
    ep.set_defaults(func=cmd_emit_plots)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalBreakdown as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

import csv
import json

import numpy as np
import pytest

from floquet_ising import cli, gaussian, params as P, sweep
from floquet_ising.errors import ValidationError


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --------------------------------------------------------------------------
# sweep machinery
# --------------------------------------------------------------------------

def test_sweep_spec_validation():
    with pytest.raises(ValidationError):
        sweep.SweepSpec((("alpha", 0, 1, 3),), {}, "no-such-task")
    with pytest.raises(ValidationError):
        sweep.SweepSpec((("a", 0, 1, 2), ("a", 0, 1, 2)), {}, "spectrum")
    with pytest.raises(ValidationError):
        sweep.SweepSpec((("alpha", 0, 1, 2),), {"alpha": 1.0}, "spectrum")
    with pytest.raises(ValidationError):
        sweep.SweepSpec((("alpha", 0, 1, 0),), {}, "spectrum")


def test_grid_enumeration_row_major():
    spec = sweep.SweepSpec((("a", 0.0, 1.0, 2), ("b", 0.0, 2.0, 3)), {}, "spectrum")
    pts = list(spec.grid())
    assert [i for i, _ in pts] == list(range(6))
    assert pts[0][1]["a"] == 0.0 and pts[0][1]["b"] == 0.0
    assert pts[1][1]["b"] == 1.0
    assert pts[3][1]["a"] == 1.0 and pts[3][1]["b"] == 0.0


SPEC_ARGS = dict(
    axes=(("alpha", 0.4, 1.6, 2), ("beta_J", -1.0, -0.2, 2)),
    fixed={"beta_h": 0.5, "L": 16},
    task="spectrum",
)


def test_sweep_deterministic_reruns(tmp_path):
    spec = sweep.SweepSpec(workers=1, **SPEC_ARGS)
    m1 = sweep.run_sweep(spec, tmp_path / "r1")
    m2 = sweep.run_sweep(spec, tmp_path / "r2")
    b1 = (tmp_path / "r1" / "spectrum_sweep.csv").read_bytes()
    b2 = (tmp_path / "r2" / "spectrum_sweep.csv").read_bytes()
    assert b1 == b2
    assert m1.outputs == m2.outputs
    assert all(p["status"] == "ok" for p in m1.points)


def test_sweep_worker_count_independent(tmp_path):
    blobs = []
    for workers in (1, 4, 8):
        spec = sweep.SweepSpec(workers=workers, **SPEC_ARGS)
        out = tmp_path / f"w{workers}"
        sweep.run_sweep(spec, out)
        blobs.append((out / "spectrum_sweep.csv").read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_sweep_fail_soft(tmp_path):
    spec = sweep.SweepSpec((("L", 4, 16, 2),), {"alpha": 0.5, "beta_J": -1.0,
                                                "beta_h": 0.5}, "spectrum")
    manifest = sweep.run_sweep(spec, tmp_path)
    statuses = [p["status"] for p in manifest.points]
    assert statuses.count("error") == 1
    assert statuses.count("ok") == 1
    assert len(manifest.points) == 2
    rows = read_rows(tmp_path / "spectrum_sweep.csv")
    assert {r["grid_index"] for r in rows} == {"1"}


def test_single_point_sweep_matches_direct(tmp_path):
    fixed = {"beta_h": 0.1, "L": 16, "n_periods": 10, "subsystem_length": 4,
             "alpha_J": 0.2, "alpha_h": 0.2}
    spec = sweep.SweepSpec((("beta_J", -0.1, -0.1, 1),), fixed, "evolve")
    sweep.run_sweep(spec, tmp_path)
    rows = read_rows(tmp_path / "evolve_sweep.csv")
    p = P.make_params(0.2, -0.1, 0.2, 0.1)
    quench = P.QuenchConfig(P.named_state("neel-fermion", 16), n_periods=10)
    trace = gaussian.stroboscopic_run(p, P.lattice(16), quench,
                                      P.SubsystemSpec(1, 4))
    got = [float(r["S_A"]) for r in rows]
    assert np.allclose(got, trace.entropy, atol=1e-12)


def test_manifest_contents(tmp_path):
    spec = sweep.SweepSpec((("alpha", 0.5, 0.5, 1),),
                           {"beta_J": -1.0, "beta_h": 0.5, "L": 16},
                           "spectrum")
    manifest = sweep.run_sweep(spec, tmp_path, seed=7)
    data = json.loads((tmp_path / "manifest.json").read_text())
    assert data["seed"] == 7
    assert data["version"]
    assert "spectrum_sweep.csv" in data["outputs"]
    assert manifest.points[0]["status"] == "ok"


# --------------------------------------------------------------------------
# figure bundles
# --------------------------------------------------------------------------

def test_emit_fig2(tmp_path):
    spec = sweep.SweepSpec((("alpha", 0.4, 1.6, 3),),
                           {"beta_J": -1.0, "beta_h": 0.5, "L": 16},
                           "spectrum")
    sweep.run_sweep(spec, tmp_path)
    out = sweep.emit_plot_data("fig2", [tmp_path / "spectrum_sweep.csv"],
                              tmp_path / "plots")
    rows = read_rows(out)
    assert set(rows[0].keys()) == {"alpha", "mode_index", "abs_eps"}


def test_emit_fig3(tmp_path):
    fixed = {"beta_h": 0.1, "L": 16, "n_periods": 6, "subsystem_length": 4,
             "alpha_J": 0.2, "alpha_h": 0.2}
    spec = sweep.SweepSpec((("beta_J", -0.2, 0.1, 2),), fixed, "evolve")
    sweep.run_sweep(spec, tmp_path)
    out = sweep.emit_plot_data("fig3", [tmp_path / "evolve_sweep.csv"],
                              tmp_path / "plots")
    rows = read_rows(out)
    assert set(rows[0].keys()) == {"period", "S_A", "series"}
    assert len({r["series"] for r in rows}) == 2


def test_emit_fig6_and_missing_column(tmp_path):
    rows = []
    rng = np.random.default_rng(0)
    for L in (32, 48, 64):
        for bj in np.linspace(-0.5, -0.1, 9):
            s = 0.69 / (1 + np.exp((bj + 0.3) * L / 4.0))
            rows.append({"L": L, "beta_J": bj, "S_top": s})
    src = tmp_path / "tee.csv"
    sweep.write_csv(src, rows, ["L", "beta_J", "S_top"])
    out = sweep.emit_plot_data("fig6", [src], tmp_path / "plots")
    data = read_rows(out)
    assert set(data[0].keys()) == {"beta_J", "S_top", "L", "x_collapsed"}

    bad = tmp_path / "bad.csv"
    sweep.write_csv(bad, [{"L": 1, "beta_J": 2}], ["L", "beta_J"])
    with pytest.raises(ValidationError, match="S_top"):
        sweep.emit_plot_data("fig6", [bad], tmp_path / "plots")
    with pytest.raises(ValidationError):
        sweep.emit_plot_data("fig99", [src], tmp_path / "plots")


# --------------------------------------------------------------------------
# CLI
# --------------------------------------------------------------------------

def test_cli_spectrum(tmp_path):
    rc = cli.main(["--out-dir", str(tmp_path), "spectrum", "--alpha", "0.5",
                   "--beta-j", "-1.0", "--beta-h", "0.5", "--L", "40",
                   "--bc", "obc"])
    assert rc == 0
    rows = read_rows(tmp_path / "spectrum.csv")
    assert list(rows[0].keys()) == ["k_or_index", "re_eps", "im_eps",
                                    "classification"]
    summary = json.loads((tmp_path / "spectrum_summary.json").read_text())
    assert summary["phase"] == "0"
    assert {m["kind"] for m in summary["edge_modes"]} == {"zero"}


def test_cli_evolve_with_dump(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("alpha_J = 0.2\nbeta_J = -0.1\nalpha_h = 0.2\n"
                       "beta_h = 0.1\nL = 12\nn_periods = 4\n"
                       "subsystem_length = 3\n")
    dump = tmp_path / "corr"
    rc = cli.main(["--config", str(cfgfile), "--out-dir", str(tmp_path),
                   "evolve", "--dump-correlations", str(dump)])
    assert rc == 0
    rows = read_rows(tmp_path / "evolve.csv")
    assert len(rows) == 4
    assert float(rows[-1]["purity_residual"]) < 1e-8
    sidecar = json.loads((dump / "correlations.json").read_text())
    assert sidecar["shape"] == [24, 24]
    blob = np.fromfile(dump / sidecar["files"][0], dtype="<c16")
    c = blob.reshape(24, 24)
    assert np.linalg.norm(c + c.T - 2 * np.eye(24)) < 1e-8


def test_cli_validation_exit_code(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("alpha_J = 0.2\n")  # missing everything else
    rc = cli.main(["--config", str(cfgfile), "evolve"])
    assert rc == 2


def test_cli_spin_quench(tmp_path):
    cfgfile = tmp_path / "sq.cfg"
    cfgfile.write_text("alpha_J = 1.5\nbeta_J = -1.5\nalpha_h = 1.5\n"
                       "beta_h = 0.5\nL = 6\nbc = obc\nn_periods = 5\n"
                       "initial_state = x-down\n")
    rc = cli.main(["--config", str(cfgfile), "--out-dir", str(tmp_path),
                   "spin-quench"])
    assert rc == 0
    rows = read_rows(tmp_path / "spin_quench.csv")
    assert len(rows) == 5 * 6
    summary = read_rows(tmp_path / "spin_quench_summary.csv")
    assert list(summary[0].keys()) == ["period", "SxSx_edge", "ghz_overlap"]


def test_cli_cft_compare(tmp_path):
    rc = cli.main(["--out-dir", str(tmp_path), "cft-compare", "--l", "4",
                   "--eta", "0.2", "--t-max", "4", "--n-times", "10",
                   "--rtol", "1e-6"])
    assert rc == 0
    rows = read_rows(tmp_path / "cft_compare.csv")
    assert list(rows[0].keys()) == ["t", "S_cft", "S_numeric", "valid"]


def test_cli_sweep_and_emit(tmp_path):
    rc = cli.main(["--out-dir", str(tmp_path), "sweep", "--task", "spectrum",
                   "--axis", "alpha:0.4:1.6:2",
                   "--axis", "beta_J:-1.0:-0.2:2"]
                  )
    assert rc == 0
    assert (tmp_path / "manifest.json").exists()
    rc = cli.main(["--out-dir", str(tmp_path / "plots"), "emit-plots",
                   "--figure", "fig2", "--inputs",
                   str(tmp_path / "spectrum_sweep.csv")])
    assert rc == 0

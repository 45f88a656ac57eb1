"""Command-line driver: exit codes, artifacts, determinism, config errors."""

import json
import os
import shutil
import subprocess

import numpy as np
import pytest

from majorana import cli

SMALL_VERIFY = {"command": "verify", "n": 8, "nr": 48, "rmax": 16.0,
                "ntheta": 12, "nphi": 24, "lmax": 2, "np": 48}
SMALL_SPH = {"nr": 48, "rmax": 16.0, "ntheta": 12, "nphi": 24,
             "lmax": 2, "np": 48}


def write_cfg(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(tmp_path, command, doc, out="out"):
    cfg = write_cfg(tmp_path, f"{command}.json", doc)
    od = tmp_path / out
    code = cli.main([command, "--config", cfg, "--out", str(od), "--quiet"])
    return code, od


def load_summary(od, name="summary.json"):
    return json.loads((od / name).read_text())


# -------------------------------------------------------------------- verify

def test_verify_small_passes(tmp_path):
    code, od = run(tmp_path, "verify", SMALL_VERIFY)
    assert code == 0
    rep = load_summary(od, "report.json")
    assert rep["passed"] is True
    assert len(rep["checks"]) >= 30


def test_verify_tolerance_override_fails(tmp_path):
    doc = dict(SMALL_VERIFY, tolerances={"fourier.roundtrip": 1e-30})
    code, od = run(tmp_path, "verify", doc)
    assert code == 1
    rep = load_summary(od, "report.json")
    failed = [c["test_id"] for c in rep["checks"] if not c["passed"]]
    assert failed == ["fourier.roundtrip"]


# -------------------------------------------------------------------- evolve

def test_evolve_cartesian_artifacts(tmp_path):
    doc = {"command": "evolve", "n": 8, "L": 8.0, "mass": 1.0,
           "time": {"steps": 5, "dt": 0.05},
           "output": {"formats": ["csv", "bin"]}}
    code, od = run(tmp_path, "evolve", doc)
    assert code == 0
    s = load_summary(od)
    assert s["passed"] and s["max_norm_drift_rel"] <= 1e-12
    lines = (od / "frames.csv").read_text().splitlines()
    assert lines[0] == "step,t,norm,energy,cx,cy,cz"
    assert len(lines) == 1 + 6  # header + steps+1 frames
    assert (od / "final.csv").exists() and (od / "final.maj1").exists()


def test_evolve_deterministic(tmp_path):
    doc = {"command": "evolve", "n": 8, "mass": 1.0,
           "time": {"steps": 4, "dt": 0.1}, "seed": 5,
           "output": {"formats": ["csv", "bin"]}}
    _, od1 = run(tmp_path, "evolve", doc, out="o1")
    _, od2 = run(tmp_path, "evolve", doc, out="o2")
    assert (od1 / "frames.csv").read_bytes() == (od2 / "frames.csv").read_bytes()
    assert (od1 / "final.maj1").read_bytes() == (od2 / "final.maj1").read_bytes()


def test_evolve_boosted_packet_tracks_group_velocity(tmp_path):
    doc = {"command": "evolve", "n": 24, "L": 12.0, "mass": 1.0,
           "initial": {"type": "gaussian", "center": [4.0, 6.0, 6.0],
                       "width": 1.5, "boost": [1.2, 0.0, 0.0]},
           "time": {"steps": 60, "dt": 0.02}}
    code, od = run(tmp_path, "evolve", doc)
    assert code == 0
    s = load_summary(od)
    vp, vm = s["group_velocity_predicted"], s["group_velocity_measured"]
    assert abs(vm[0] - vp[0]) <= 0.02 * abs(vp[0])
    assert abs(vm[1]) < 0.02 and abs(vm[2]) < 0.02


def test_evolve_zero_field_is_quiet(tmp_path):
    doc = {"command": "evolve", "n": 8, "mass": 1.0,
           "initial": {"type": "gaussian", "spinor": [0, 0, 0, 0]},
           "time": {"steps": 3, "dt": 0.1}}
    code, od = run(tmp_path, "evolve", doc)
    assert code == 0
    rows = (od / "frames.csv").read_text().splitlines()[1:]
    norms = [float(r.split(',')[2]) for r in rows]
    assert norms == [0.0] * len(norms)


def test_evolve_spherical(tmp_path):
    doc = dict(SMALL_SPH, command="evolve", mass=1.0,
               initial={"type": "gaussian", "l": 1, "mu": 0},
               time={"steps": 5, "dt": 0.05},
               output={"formats": ["csv", "bin"]})
    code, od = run(tmp_path, "evolve", doc)
    assert code == 0
    s = load_summary(od)
    assert s["domain"] == "spherical" and s["passed"]
    assert (od / "final.majs").exists()


# ----------------------------------------------------------------- transform

def test_transform_cartesian(tmp_path):
    doc = {"command": "transform", "n": 8, "mass": 2.0,
           "output": {"formats": ["csv", "bin"]}}
    code, od = run(tmp_path, "transform", doc)
    assert code == 0
    s = load_summary(od)
    assert s["passed"] and s["max_error_rel"] <= 1e-9
    assert not s["zero_mode_dropped"]
    for name in ("input.csv", "reconstruction.csv", "spectrum.csv",
                 "input.maj1", "reconstruction.maj1"):
        assert (od / name).exists()


def test_transform_massless_drops_zero_mode(tmp_path):
    doc = {"command": "transform", "n": 8, "mass": 0.0}
    code, od = run(tmp_path, "transform", doc)
    assert code == 0
    s = load_summary(od)
    assert s["zero_mode_dropped"] is True and s["passed"]


def test_transform_spherical(tmp_path):
    doc = dict(SMALL_SPH, command="transform", mass=1.0)
    code, od = run(tmp_path, "transform", doc)
    assert code == 0
    s = load_summary(od)
    assert s["domain"] == "spherical" and s["passed"]
    assert s["l2_error_rel"] <= 1e-4


def test_transform_respects_formats_csv_only(tmp_path):
    doc = {"command": "transform", "n": 8, "mass": 1.0,
           "output": {"formats": ["csv"]}}
    code, od = run(tmp_path, "transform", doc)
    assert code == 0
    assert (od / "input.csv").exists()
    assert not (od / "input.maj1").exists()


# ------------------------------------------------------------------ spectrum

def test_spectrum_single_mode_is_sparse(tmp_path):
    doc = {"command": "spectrum", "n": 8, "mass": 1.0,
           "initial": {"type": "single-mode", "p": [2, -1, 0]}}
    code, od = run(tmp_path, "spectrum", doc)
    assert code == 0
    s = load_summary(od)
    assert s["peak_mode"] == [2, -1, 0]
    assert s["modes_above_1e-12_of_peak"] == 1
    assert s["dominant_single_mode"] is True
    assert s["peak_fraction"] > 0.999


@pytest.mark.filterwarnings("ignore:field tail")  # delta spectra do not decay
def test_spectrum_spherical_single_mode(tmp_path):
    doc = dict(SMALL_SPH, command="spectrum", mass=1.0,
               initial={"type": "single-mode", "p": 1.5, "l": 2, "mu": -1})
    code, od = run(tmp_path, "spectrum", doc)
    assert code == 0
    s = load_summary(od)
    p, l, mu = s["peak_mode"]
    assert (l, mu) == (2, -1)
    assert abs(p - 1.5) <= 0.5 * np.pi * 48 / 16.0 / 48  # within one dp bin
    assert s["dominant_single_mode"] is True


# -------------------------------------------------------------- config errors

@pytest.mark.parametrize("doc", [
    {"command": "evolve", "masss": 1.0},                      # unknown key
    {"command": "evolve", "n": 7},                            # odd n
    {"command": "evolve", "np": 8, "np_points": 8, "nr": 48}, # duplicate key
    {"command": "verify", "n": 8},                            # command mismatch
    {"command": "evolve", "n": 8, "nr": 48},                  # ambiguous domain
    {"command": "evolve", "n": 8, "output": {"formats": ["hdf5"]}},
    {"command": "evolve", "n": 8, "mass": -1.0},
    {"command": "evolve", "n": 8, "time": {"steps": -3, "dt": 0.1}},
    {"command": "evolve", "n": 8,
     "initial": {"type": "single-mode", "p": [4, 0, 0]}},     # Nyquist
    {"command": "evolve", "n": 8, "initial": {"type": "vortex"}},
])
def test_bad_configs_exit_2(tmp_path, doc):
    cfg = write_cfg(tmp_path, "bad.json", doc)
    assert cli.main(["evolve", "--config", cfg, "--out",
                     str(tmp_path / "o"), "--quiet"]) == 2


def test_missing_and_malformed_config(tmp_path):
    assert cli.main(["verify", "--config", str(tmp_path / "nope.json"),
                     "--quiet"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["verify", "--config", str(bad), "--quiet"]) == 2


# ----------------------------------------------------------------- threading

def test_thread_env_rejects_garbage(tmp_path, monkeypatch):
    monkeypatch.setenv("MAJORANA_THREADS", "abc")
    cfg = write_cfg(tmp_path, "v.json", {"command": "evolve", "n": 8})
    assert cli.main(["evolve", "--config", cfg, "--quiet"]) == 2


def test_thread_env_sets_blas_defaults(tmp_path, monkeypatch):
    monkeypatch.setenv("MAJORANA_THREADS", "3")
    monkeypatch.delenv("OMP_NUM_THREADS", raising=False)
    doc = {"command": "spectrum", "n": 8, "mass": 1.0,
           "initial": {"type": "single-mode", "p": [1, 0, 0]}}
    code, _ = run(tmp_path, "spectrum", doc)
    assert code == 0
    assert os.environ["OMP_NUM_THREADS"] == "3"


# ---------------------------------------------------------------- entry point

@pytest.mark.skipif(shutil.which("majorana") is None,
                    reason="console script not installed")
def test_console_script_runs(tmp_path):
    cfg = write_cfg(tmp_path, "t.json", {"command": "transform", "n": 8,
                                         "mass": 1.0})
    proc = subprocess.run(["majorana", "transform", "--config", cfg,
                           "--out", str(tmp_path / "o"), "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "PASS" in proc.stdout

"""Command-line harness: verification suites, wave-packet evolution, and
transform round trips, driven by a JSON run configuration.

Numerical submodules are imported inside the command handlers so that
MAJORANA_THREADS can cap BLAS/OpenMP parallelism before numpy loads
(0 or unset leaves the libraries at their own defaults).

Exit status: 0 full pass, 1 any check failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "VECLIB_MAXIMUM_THREADS", "NUMEXPR_NUM_THREADS")

_COMMANDS = ("verify", "evolve", "transform", "spectrum")

_TOP_KEYS = {"command", "mass", "domain", "n", "L", "nr", "rmax", "ntheta",
             "nphi", "lmax", "np", "np_points", "initial", "time", "output",
             "tolerances", "seed"}


class ConfigError(Exception):
    """Invalid run configuration (bad file, bad JSON, bad values)."""


def _apply_thread_env() -> None:
    raw = os.environ.get("MAJORANA_THREADS", "0").strip()
    try:
        nt = int(raw)
    except ValueError:
        raise ConfigError(f"MAJORANA_THREADS must be an integer, got {raw!r}")
    if nt < 0:
        raise ConfigError("MAJORANA_THREADS must be >= 0")
    if nt > 0:
        for var in _THREAD_VARS:
            os.environ.setdefault(var, str(nt))


@dataclass
class RunConfig:
    """Validated run parameters; grid fields for both domains carry defaults."""
    command: str
    mass: float = 1.0
    domain: str = "cartesian"
    n: int = 16
    L: float = 8.0
    nr: int = 256
    rmax: float = 40.0
    ntheta: int = 32
    nphi: int = 64
    lmax: int = 5
    np_points: int = 256
    initial: dict = field(default_factory=dict)
    steps: int = 100
    dt: float = 0.05
    out_dir: str = "out"
    formats: tuple = ("csv",)
    tolerances: dict = field(default_factory=dict)
    seed: int = 1234


def _as_float(raw: dict, key: str, default: float, lo=None) -> float:
    v = raw.get(key, default)
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if not (v == v) or v in (float("inf"), float("-inf")):
        raise ConfigError(f"{key} must be finite")
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    return v


def _as_int(raw: dict, key: str, default: int, lo: int) -> int:
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    return v


def load_config(path: str, command: str, out_override: str | None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    if "command" in raw and raw["command"] != command:
        raise ConfigError(f"config command {raw['command']!r} does not match "
                          f"invoked command {command!r}")

    sph_keys = {"nr", "rmax", "ntheta", "nphi", "lmax", "np", "np_points"}
    domain = raw.get("domain")
    if domain is None:
        has_s = bool(sph_keys & set(raw))
        has_c = "n" in raw or "L" in raw
        if has_s and has_c and command != "verify":
            raise ConfigError("both cartesian and spherical grid keys given; "
                              "set \"domain\" explicitly")
        domain = "spherical" if has_s and not has_c else "cartesian"
    if domain not in ("cartesian", "spherical"):
        raise ConfigError(f"domain must be cartesian or spherical, got {domain!r}")

    if "np" in raw and "np_points" in raw:
        raise ConfigError("give only one of np / np_points")
    npp = raw.get("np", raw.get("np_points", 256))
    raw2 = dict(raw)
    raw2["np_points"] = npp

    tdict = raw.get("time", {})
    if not isinstance(tdict, dict):
        raise ConfigError("time must be an object with steps/dt")
    odict = raw.get("output", {})
    if not isinstance(odict, dict):
        raise ConfigError("output must be an object")
    formats = odict.get("formats", ["csv"])
    if (not isinstance(formats, list) or not formats
            or any(f not in ("csv", "bin") for f in formats)):
        raise ConfigError(f"output.formats must be a non-empty subset of "
                          f"[csv, bin], got {formats!r}")
    initial = raw.get("initial", {})
    if not isinstance(initial, dict):
        raise ConfigError("initial must be an object")
    tol = raw.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances must be an object of test-id -> number")

    cfg = RunConfig(
        command=command,
        mass=_as_float(raw, "mass", 1.0, lo=0.0),
        domain=domain,
        n=_as_int(raw, "n", 16, lo=2),
        L=_as_float(raw, "L", 8.0),
        nr=_as_int(raw2, "nr", 256, lo=8),
        rmax=_as_float(raw, "rmax", 40.0),
        ntheta=_as_int(raw, "ntheta", 32, lo=4),
        nphi=_as_int(raw, "nphi", 64, lo=4),
        lmax=_as_int(raw, "lmax", 5, lo=1),
        np_points=_as_int(raw2, "np_points", 256, lo=2),
        initial=initial,
        steps=_as_int(tdict, "steps", 100, lo=0),
        dt=_as_float(tdict, "dt", 0.05),
        out_dir=str(out_override or odict.get("directory", "out")),
        formats=tuple(dict.fromkeys(formats)),
        tolerances=tol,
        seed=_as_int(raw, "seed", 1234, lo=0),
    )
    if cfg.L <= 0 or cfg.rmax <= 0:
        raise ConfigError("box lengths must be positive")
    if cfg.n % 2:
        raise ConfigError(f"n must be even, got {cfg.n}")
    return cfg


def _out_path(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _f(v) -> str:
    return format(float(v), ".17g")


# -------------------------------------------------------------------- verify

def _cmd_verify(cfg: RunConfig, quiet: bool) -> int:
    from . import verify as vf

    st = vf.VerifySettings(mass=cfg.mass, n=cfg.n, L=cfg.L, nr=cfg.nr,
                           rmax=cfg.rmax, ntheta=cfg.ntheta, nphi=cfg.nphi,
                           lmax=cfg.lmax, np_points=cfg.np_points,
                           seed=cfg.seed, tolerances=cfg.tolerances)

    def progress(c):
        if not quiet:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.test_id}: "
                  f"measured {c.measured:.3e} tol {c.tolerance:.1e} | {c.anchor}",
                  flush=True)

    report = vf.run_suite(st, progress)
    out = _out_path(cfg)
    (out / "report.json").write_text(report.to_json() + "\n")
    npass = sum(c.passed for c in report.checks)
    print(f"{'PASS' if report.passed else 'FAIL'}: {npass}/{len(report.checks)} "
          f"checks passed; report written to {out / 'report.json'}")
    return 0 if report.passed else 1


# ------------------------------------------------------- initial conditions

def _initial_cartesian(cfg: RunConfig):
    import numpy as np

    from . import fourier

    grid = fourier.CartesianGrid(cfg.n, cfg.L)
    ini = cfg.initial
    kind = ini.get("type", "gaussian")
    chi = np.asarray(ini.get("spinor", [1.0, 0.0, 0.0, 0.0]), dtype=float)
    if chi.shape != (4,):
        raise ConfigError("initial.spinor must be a 4-vector")
    if kind == "gaussian":
        center = np.asarray(ini.get("center", [cfg.L / 2] * 3), dtype=float)
        if center.shape != (3,):
            raise ConfigError("initial.center must be a 3-vector")
        width = float(ini.get("width", cfg.L / 10))
        if not width > 0:
            raise ConfigError("initial.width must be > 0")
        boost = np.asarray(ini.get("boost", [0.0, 0.0, 0.0]), dtype=float)
        if boost.shape != (3,):
            raise ConfigError("initial.boost must be a 3-vector")
        if np.any(boost != 0.0):
            # a moving packet is built as a single-sided momentum bump at
            # +boost; a rotor-modulated position Gaussian would put weight at
            # -boost too (mirror channel) and the centroid would not track
            # the group velocity <p>/<E>
            bump = np.exp(-((grid.P - boost) ** 2).sum(-1) * width ** 2 / 2.0)
            ph = grid.P @ center
            vals = bump[..., None] * np.einsum('xyzab,b->xyza',
                                               fourier.rotor(-ph), chi)
            spec = fourier.MomentumSpectrum(grid, vals, cfg.mass)
            return grid, fourier.inverse(spec)
        X, Y, Z = np.meshgrid(grid.xs, grid.xs, grid.xs, indexing='ij')
        env = np.exp(-((X - center[0]) ** 2 + (Y - center[1]) ** 2
                       + (Z - center[2]) ** 2) / (2 * width ** 2))
        return grid, fourier.SpinorField(grid, env[..., None] * chi, cfg.mass)
    if kind == "single-mode":
        kvec = ini.get("p")
        if (not isinstance(kvec, list) or len(kvec) != 3
                or any(isinstance(v, bool) or not isinstance(v, int) for v in kvec)):
            raise ConfigError("cartesian single-mode initial.p must be 3 integers")
        if any(not -cfg.n // 2 < v < cfg.n // 2 for v in kvec):
            raise ConfigError(f"initial.p components must lie in "
                              f"({-cfg.n // 2}, {cfg.n // 2}) (Nyquist excluded)")
        return grid, fourier.plane_wave(grid, kvec, cfg.mass, chi)
    raise ConfigError(f"unknown initial.type {kind!r}")


def _initial_spherical(cfg: RunConfig):
    import numpy as np

    from . import hankel

    grid = hankel.SphericalGrid(cfg.nr, cfg.rmax, cfg.ntheta, cfg.nphi,
                                cfg.lmax, cfg.np_points)
    ini = cfg.initial
    kind = ini.get("type", "gaussian")
    chi = np.asarray(ini.get("spinor", [1.0, 0.0, 0.0, 0.0]), dtype=float)
    if chi.shape != (4,):
        raise ConfigError("initial.spinor must be a 4-vector")
    l = ini.get("l", 1)
    mu = ini.get("mu", 0)
    try:
        mode = hankel.AngularMode(l, mu)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid initial (l, mu): {e}")
    if mode.l > cfg.lmax:
        raise ConfigError(f"initial.l = {mode.l} exceeds lmax = {cfg.lmax}")
    if kind == "gaussian":
        if ini.get("boost") is not None:
            raise ConfigError("initial.boost is not supported on the "
                              "spherical domain")
        center = ini.get("center", cfg.rmax / 4)
        if isinstance(center, list):
            raise ConfigError("spherical initial.center is a radius (number)")
        r0 = float(center)
        width = float(ini.get("width", cfg.rmax / 20))
        if not width > 0:
            raise ConfigError("initial.width must be > 0")
        env = np.exp(-((grid.r - r0) / width) ** 2)
        base = np.einsum('xyab,b->xya', grid.omegas[grid.mode_index[tuple(mode)]],
                         chi)
        vals = env[:, None, None, None] * base[None]
        return grid, hankel.SphericalField(grid, vals, cfg.mass), None
    if kind == "single-mode":
        p = ini.get("p")
        try:
            p = float(p)
        except (TypeError, ValueError):
            raise ConfigError("spherical single-mode initial.p must be a number")
        if not 0 < p <= grid.pmax:
            raise ConfigError(f"initial.p must lie in (0, {grid.pmax:.6g}]")
        kp = int(np.clip(round(p / grid.dp - 0.5), 0, grid.np_points - 1))
        co = np.zeros((grid.np_points, len(grid.modes), 4))
        co[kp, grid.mode_index[tuple(mode)]] = chi
        spec = hankel.HankelSpectrum(grid, co, cfg.mass)
        return grid, hankel.inverse_hankel(spec), spec
    raise ConfigError(f"unknown initial.type {kind!r}")


# -------------------------------------------------------------------- evolve

def _cmd_evolve(cfg: RunConfig, quiet: bool) -> int:
    import numpy as np

    from . import fourier, hankel, io as fio

    out = _out_path(cfg)
    rows = []
    if cfg.domain == "cartesian":
        grid, field0 = _initial_cartesian(cfg)
        spec = fourier.forward(field0)
        E = grid.energies(cfg.mass)
        w = (spec.values ** 2).sum(-1)
        wtot = w.sum()
        energy = float((E * w).sum() / wtot) if wtot > 0 else 0.0
        pmean = (np.einsum('xyzj,xyz->j', grid.P, w) / wtot if wtot > 0
                 else np.zeros(3))
        vg_pred = pmean / energy if energy > 0 else np.zeros(3)
        X, Y, Z = np.meshgrid(grid.xs, grid.xs, grid.xs, indexing='ij')

        def centroid(fld):
            dens = (fld.values ** 2).sum(-1)
            tot = dens.sum()
            if tot <= 0:
                return np.zeros(3)
            return np.array([(X * dens).sum(), (Y * dens).sum(),
                             (Z * dens).sum()]) / tot

        norm0 = spec.norm2()
        cur = spec
        c0 = centroid(field0)
        drift = 0.0
        for k in range(cfg.steps + 1):
            if k:
                cur = fourier.evolve(cur, cfg.dt)
            fld = fourier.inverse(cur) if k else field0
            nrm = cur.norm2()
            drift = max(drift, abs(nrm - norm0) / norm0 if norm0 > 0 else 0.0)
            cx, cy, cz = centroid(fld)
            rows.append((k, k * cfg.dt, nrm, energy, cx, cy, cz))
        tend = cfg.steps * cfg.dt
        vg_meas = ((np.array(rows[-1][4:7]) - c0) / tend if tend > 0
                   else np.zeros(3))
        header = "step,t,norm,energy,cx,cy,cz"
        final = fourier.inverse(cur)
        if "bin" in cfg.formats:
            fio.write_maj1(out / "final.maj1", final)
        if "csv" in cfg.formats:
            fio.write_field_csv(out / "final.csv", final)
        summary = {
            "domain": "cartesian", "steps": cfg.steps, "dt": cfg.dt,
            "norm_initial": norm0, "max_norm_drift_rel": drift,
            "energy_expectation": energy,
            "group_velocity_predicted": [float(v) for v in vg_pred],
            "group_velocity_measured": [float(v) for v in vg_meas],
            "passed": drift <= 1e-12,
        }
    else:
        grid, field0, spec = _initial_spherical(cfg)
        if spec is None:
            spec = hankel.forward_hankel(field0)
        E = grid.energies(cfg.mass)
        pw = spec.p_weights()
        w = np.einsum('pma,pma,p->p', spec.values, spec.values, pw)
        wtot = w.sum()
        energy = float((E * w).sum() / wtot) if wtot > 0 else 0.0
        norm0 = spec.norm2()
        cur = spec
        drift = 0.0
        for k in range(cfg.steps + 1):
            if k:
                cur = hankel.evolve_hankel(cur, cfg.dt)
            nrm = cur.norm2()
            drift = max(drift, abs(nrm - norm0) / norm0 if norm0 > 0 else 0.0)
            rows.append((k, k * cfg.dt, nrm, energy))
        header = "step,t,norm,energy"
        final = hankel.inverse_hankel(cur)
        if "bin" in cfg.formats:
            fio.write_majs(out / "final.majs", final)
        if "csv" in cfg.formats:
            fio.write_spherical_csv(out / "final.csv", final)
        summary = {
            "domain": "spherical", "steps": cfg.steps, "dt": cfg.dt,
            "norm_initial": norm0, "max_norm_drift_rel": drift,
            "energy_expectation": energy,
            "passed": drift <= 1e-12,
        }

    with open(out / "frames.csv", "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(f"{row[0]}," + ",".join(_f(v) for v in row[1:]) + "\n")
    _write_json(out / "summary.json", summary)
    if not quiet:
        print(f"evolved {cfg.steps} steps of dt = {cfg.dt}; "
              f"max relative norm drift {summary['max_norm_drift_rel']:.3e}")
    print(f"{'PASS' if summary['passed'] else 'FAIL'}: artifacts in {out}")
    return 0 if summary["passed"] else 1


# ----------------------------------------------------------------- transform

def _cmd_transform(cfg: RunConfig, quiet: bool) -> int:
    import numpy as np

    from . import fourier, hankel, io as fio

    out = _out_path(cfg)
    if cfg.domain == "cartesian":
        grid, field0 = _initial_cartesian(cfg)
        spec = fourier.forward(field0)
        recon = fourier.inverse(spec)
        scale = np.abs(field0.values).max()
        if cfg.mass > 0:
            max_rel = (np.abs(recon.values - field0.values).max() / scale
                       if scale > 0 else 0.0)
            l2_rel = (np.sqrt(((recon.values - field0.values) ** 2).sum()
                              / (field0.values ** 2).sum())
                      if scale > 0 else 0.0)
        else:
            # p = 0 is dropped at m = 0: compare on the invariant subspace
            spec2 = fourier.forward(recon)
            sscale = np.abs(spec.values).max()
            max_rel = (np.abs(spec2.values - spec.values).max() / sscale
                       if sscale > 0 else 0.0)
            l2_rel = max_rel
        parseval = (abs(spec.norm2() - recon.norm2())
                    / recon.norm2() if recon.norm2() > 0 else 0.0)
        threshold = 1e-9
        if "bin" in cfg.formats:
            fio.write_maj1(out / "input.maj1", field0)
            fio.write_maj1(out / "reconstruction.maj1", recon)
        if "csv" in cfg.formats:
            fio.write_field_csv(out / "input.csv", field0)
            fio.write_field_csv(out / "reconstruction.csv", recon)
        fio.write_spectrum_csv(out / "spectrum.csv", spec)
        summary = {
            "domain": "cartesian", "mass": cfg.mass,
            "zero_mode_dropped": bool(spec.zero_mode_dropped),
            "max_error_rel": float(max_rel), "l2_error_rel": float(l2_rel),
            "parseval_rel": float(parseval), "threshold": threshold,
            "passed": bool(max_rel <= threshold),
        }
    else:
        grid, field0, _ = _initial_spherical(cfg)
        spec = hankel.forward_hankel(field0)
        recon = hankel.inverse_hankel(spec)
        nrm0 = field0.norm2()
        diff = hankel.SphericalField(grid, recon.values - field0.values, cfg.mass)
        l2_rel = np.sqrt(diff.norm2() / nrm0) if nrm0 > 0 else 0.0
        scale = np.abs(field0.values).max()
        max_rel = (np.abs(recon.values - field0.values).max() / scale
                   if scale > 0 else 0.0)
        threshold = 1e-4
        if "bin" in cfg.formats:
            fio.write_majs(out / "input.majs", field0)
            fio.write_majs(out / "reconstruction.majs", recon)
        if "csv" in cfg.formats:
            fio.write_spherical_csv(out / "input.csv", field0)
            fio.write_spherical_csv(out / "reconstruction.csv", recon)
        fio.write_hankel_csv(out / "spectrum.csv", spec)
        summary = {
            "domain": "spherical", "mass": cfg.mass,
            "max_error_rel": float(max_rel), "l2_error_rel": float(l2_rel),
            "threshold": threshold,
            "passed": bool(l2_rel <= threshold),
        }
    _write_json(out / "summary.json", summary)
    if not quiet:
        print(f"round-trip errors: max {summary['max_error_rel']:.3e}, "
              f"L2 {summary['l2_error_rel']:.3e} (threshold {threshold:.0e})")
    print(f"{'PASS' if summary['passed'] else 'FAIL'}: artifacts in {out}")
    return 0 if summary["passed"] else 1


# ------------------------------------------------------------------ spectrum

def _cmd_spectrum(cfg: RunConfig, quiet: bool) -> int:
    import numpy as np

    from . import fourier, hankel, io as fio

    out = _out_path(cfg)
    if cfg.domain == "cartesian":
        grid, field0 = _initial_cartesian(cfg)
        spec = fourier.forward(field0)
        mags = (spec.values ** 2).sum(-1) / grid.L ** 3
        total = mags.sum()
        idx = np.unravel_index(int(mags.argmax()), mags.shape)
        peak_mode = [int(grid.ks[i]) for i in idx]
        fio.write_spectrum_csv(out / "spectrum.csv", spec)
    else:
        grid, field0, _ = _initial_spherical(cfg)
        spec = hankel.forward_hankel(field0)
        mags = np.einsum('pma,pma,p->pm', spec.values, spec.values,
                         spec.p_weights())
        total = mags.sum()
        kp, im = np.unravel_index(int(mags.argmax()), mags.shape)
        l, mu = grid.modes[im]
        peak_mode = [float(grid.p[kp]), int(l), int(mu)]
        fio.write_hankel_csv(out / "spectrum.csv", spec)
    peak = float(mags.max())
    peak_fraction = peak / float(total) if total > 0 else 0.0
    n_sig = int((mags > 1e-12 * peak).sum()) if peak > 0 else 0
    summary = {
        "domain": cfg.domain, "mass": cfg.mass,
        "norm2": float(total),
        "peak_mode": peak_mode,
        "peak_fraction": float(peak_fraction),
        "modes_above_1e-12_of_peak": n_sig,
        "dominant_single_mode": bool(peak_fraction > 0.5),
    }
    _write_json(out / "summary.json", summary)
    if not quiet:
        print(f"peak mode {peak_mode} carries {peak_fraction:.4f} of norm^2; "
              f"{n_sig} modes above 1e-12 of peak")
    print(f"spectrum written to {out / 'spectrum.csv'}")
    return 0


# --------------------------------------------------------------------- main

def _parse_args(argv):
    ap = argparse.ArgumentParser(
        prog="majorana",
        description="Majorana spinor transform toolkit: verification suites, "
                    "wave-packet evolution, and transform round trips.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, doc in (("verify", "run every invariant suite, write report.json"),
                      ("evolve", "rotor-evolve an initial condition"),
                      ("transform", "forward + inverse round trip with artifacts"),
                      ("spectrum", "forward transform and sparsity summary")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None,
                       help="output directory (overrides output.directory)")
        p.add_argument("--quiet", action="store_true",
                       help="suppress per-check/progress output")
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        _apply_thread_env()
        cfg = load_config(args.config, args.command, args.out)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    handler = {"verify": _cmd_verify, "evolve": _cmd_evolve,
               "transform": _cmd_transform, "spectrum": _cmd_spectrum}[args.command]
    try:
        return handler(cfg, args.quiet)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        # invalid grid/initial parameters rejected by the library layer
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

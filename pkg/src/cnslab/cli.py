"""Command-line entry point.

    cnslab criteria      --gammas 1,2,3 --lambda 1 --mu 1
    cnslab exact         --n 3 --gamma 2 --T 1
    cnslab profile-check --n 3 --gamma 2
    cnslab simulate      --config run.cfg
    cnslab scale-check   --kappa 2 --levels 200,400,800
    cnslab diagnose      --diagnostics-file out/diagnostics.csv

Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 blowup detected (recorded in the manifest; a success signal for
blowup-hunting runs).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from . import config as cfgmod
from . import diagnostics as diag
from .errors import BlowupDetected, CNSLabError, ConfigError, FitDegenerate
from .exact_solution import ExactBlowup
from .grid import RadialGrid
from .params import delta_of, kappa_bound, select_p
from .profile import Profile, explicit_profile, lp_obstruction, profile_residual
from .scaling import ScalingTransform, invariance_check_numeric
from .solver import SolverConfig, simulate

log = logging.getLogger("cnslab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_BLOWUP = 0, 2, 3, 4
SUBCOMMANDS = ("exact", "profile-check", "scale-check", "criteria", "simulate", "diagnose")


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def solver_config(cfg: cfgmod.RunConfig, T_ref=None) -> SolverConfig:
    return SolverConfig(cfl=cfg.cfl, floor=cfg.floor, reconstruction=cfg.reconstruction, limiter=cfg.limiter,
                        dt_min=cfg.dt_min, max_steps=cfg.max_steps, q=cfg.q, p=cfg.p, T_ref=T_ref)


# --- subcommands: each returns (exit code, notes) and writes into ``out`` -----------

def cmd_criteria(cfg, out: Path):
    p = select_p(cfg.lam, cfg.mu)
    rows = [(g, p, kappa_bound(g, p), delta_of(g)) for g in cfg.gammas]
    header = ("gamma", "p", "kappa_max", "delta")
    write_csv(out / "criteria.csv", header, rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([[_fmt(v) for v in row] for row in rows])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK, {}


def cmd_exact(cfg, out: Path):
    params = cfg.fluid_params()
    sol = ExactBlowup(cfg.T, params)
    radii = np.linspace(cfg.sample_r_min, cfg.sample_r_max, cfg.sample_count)
    rows = []
    worst = 0.0
    for t in cfg.sample_times:
        x = np.zeros((len(radii), params.n))
        x[:, 0] = radii
        rho, u = sol.evaluate(t, x)
        res = sol.residual(t, x)
        for k, r in enumerate(radii):
            rows.append((t, r, rho[k], u[k, 0], res.r_mass[k], res.r_momentum[k, 0]))
        worst = max(worst, float(np.max(np.abs(res.r_mass))), float(np.max(np.abs(res.r_momentum))))
    write_csv(out / "exact.csv", ("t", "r", "rho", "u", "r_mass", "r_momentum"), rows)
    return EXIT_OK, {"max_abs_residual": worst}


def cmd_profile_check(cfg, out: Path):
    params = cfg.fluid_params()
    if cfg.profile_file:
        with open(cfg.profile_file, newline="") as fh:
            data = list(csv.DictReader(fh))
        y = np.array([float(d["y"]) for d in data])
        prof = Profile.from_samples(y, np.array([float(d["theta"]) for d in data]),
                                    np.array([float(d["v"]) for d in data]))
    else:
        prof = explicit_profile(params)
    radii = np.linspace(cfg.sample_r_min, cfg.sample_r_max, cfg.sample_count)
    y = np.zeros((len(radii), params.n))
    y[:, 0] = radii
    res = profile_residual(prof, params, y)
    rows = [(r, prof.theta(r), prof.v(r), res.r_mass[k], res.r_momentum[k, 0]) for k, r in enumerate(radii)]
    write_csv(out / "profile.csv", ("y", "theta", "v", "r_mass", "r_momentum"), rows)
    obs = lp_obstruction(prof, params, cfg.lp_exponent, cfg.lp_radius)
    write_csv(out / "obstruction.csv", ("p", "R", "lhs", "rhs", "violated"),
              [(cfg.lp_exponent, cfg.lp_radius, obs.lhs, obs.rhs, str(obs.violated).lower())])
    worst = max(float(np.max(np.abs(res.r_mass))), float(np.max(np.abs(res.r_momentum))))
    return EXIT_OK, {"max_abs_residual": worst, "obstruction_violated": obs.violated}


def cmd_scale_check(cfg, out: Path):
    from .scenarios import build

    params = cfg.fluid_params()
    s = ScalingTransform(cfg.kappa, params.gamma)
    T_ref = None
    rows = []
    prev = None
    for cells in cfg.levels:
        grid, initial, bc = build(cfg, RadialGrid(cfg.r_min, cfg.r_max, cells))
        rep = invariance_check_numeric(s, params, grid, initial, cfg.t1, cfg.t2, solver_config(cfg, T_ref), bc,
                                       order=cfg.interp_order)
        ratio = prev / rep.l1_rho if prev is not None and rep.l1_rho > 0 else float("nan")
        rows.append((cells, rep.target_cells, rep.l1_rho, rep.l1_u, rep.max_rho, rep.max_u, ratio))
        prev = rep.l1_rho
    write_csv(out / "scale_check.csv",
              ("cells", "target_cells", "l1_rho", "l1_u", "max_rho", "max_u", "ratio_l1_rho"), rows)
    ratios = [r[-1] for r in rows[1:]]
    return EXIT_OK, {"min_ratio": min(ratios) if ratios else None}


def _write_snapshots(path: Path, traj):
    rows = []
    for s in traj.snapshots:
        rows.extend((s.t, r, rho, u) for r, rho, u in zip(traj.grid.centers, s.rho, s.u))
    write_csv(path, ("t", "r", "rho", "u"), rows)


def cmd_simulate(cfg, out: Path):
    from .scenarios import build

    params = cfg.fluid_params()
    grid, initial, bc = build(cfg)
    T_ref = cfg.T_ref or (cfg.T if cfg.scenario == "exact-forced" else None)
    notes = {}
    code = EXIT_OK
    try:
        traj = simulate(initial, grid, params, bc, cfg.t_end, cfg.snapshot_times, solver_config(cfg, T_ref),
                        grad_omega=cfg.grad_omega)
    except BlowupDetected as exc:
        traj = exc.trajectory
        code = EXIT_BLOWUP
        notes["blowup"] = str(exc)
        notes["blowup_time"] = exc.last_state.t if exc.last_state is not None else None
    if traj is not None:
        keep = {round(t, 15) for t in [initial.t, *cfg.snapshot_times, cfg.t_end]}
        traj_out = type(traj)(traj.grid, traj.params, [s for s in traj.snapshots if round(s.t, 15) in keep])
        if code == EXIT_BLOWUP and traj.snapshots:
            traj_out.snapshots.append(traj.snapshots[-1])
        _write_snapshots(out / "snapshots.csv", traj_out)
        cols = list(diag.STEP_COLUMNS) + (["grad_omega_l2"] if cfg.grad_omega else [])
        traj.series.to_csv(out / "diagnostics.csv", cols)
        notes.update(steps=traj.steps, floored_mass=traj.floored_mass)
    return code, notes


PLOT_SCRIPT = '''"""Plot the channels of a diagnostics CSV written by ``cnslab simulate``."""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv_path!r}
with open(path, newline="") as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
channels = [c for c in rows[0] if c != "t"]
fig, axes = plt.subplots(len(channels), 1, figsize=(7, 2 * len(channels)), sharex=True)
for ax, name in zip(axes, channels):
    pts = [(ti, float(r[name])) for ti, r in zip(t, rows) if r[name] != ""]
    if pts:
        ax.plot(*zip(*pts))
    ax.set_ylabel(name, fontsize=7)
axes[-1].set_xlabel("t")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
'''


def cmd_diagnose(cfg, out: Path):
    if not cfg.diagnostics_file:
        raise ConfigError("diagnose needs diagnostics_file")
    series = diag.DiagnosticSeries.from_csv(cfg.diagnostics_file)
    params = cfg.fluid_params()
    p = select_p(params.lam, params.mu)
    kmax = kappa_bound(params.gamma, p)
    fits, checks = [], []

    if "mass" in series:
        m = series.values("mass")
        floored = series.values("floored_mass_acc")[-1] if "floored_mass_acc" in series else 0.0
        drift = abs(m[-1] - m[0])
        allowed = floored + 1e-12 * abs(m[0])
        fits.append(("mass_drift_relative", drift / m[0] if m[0] else drift))
        checks.append(("mass_conservation", drift, allowed, drift <= allowed))
    if "balance_residual" in series:
        b = series.values("balance_residual")
        e0 = series.values("e_kin")[0] + series.values("e_pot")[0]
        fits.append(("max_abs_balance_residual", float(np.max(np.abs(b)))))
        fits.append(("max_balance_residual_relative", float(np.max(np.abs(b))) / abs(e0) if e0 else float("nan")))
    if "type1_indicator" in series:
        ind = series.values("type1_indicator")
        fits.append(("type1_indicator_min", float(ind.min())))
        fits.append(("type1_indicator_max", float(ind.max())))
        fits.append(("kappa_bound", kmax))
        checks.append(("type1_indicator_exceeds_kappa_bound", float(ind.min()), kmax, bool(ind.min() > kmax)))
    if "max_rho" in series:
        t, y = series.times("max_rho"), series.values("max_rho")
        window = tuple(cfg.fit_window) if len(cfg.fit_window) == 2 else None
        try:
            fit = diag.density_rate_fit(t, y, window)
            fits += [("kappa_hat", fit.kappa_hat), ("T_hat", fit.T_hat), ("M_hat", fit.M_hat),
                     ("fit_r2", fit.residual)]
            checks.append(("density_rate_below_kappa_bound", fit.kappa_hat, kmax, fit.kappa_hat < kmax))
        except FitDegenerate as exc:
            fits.append(("rate_fit", f"degenerate: {exc}"))
    write_csv(out / "fits.csv", ("quantity", "value"), fits)
    write_csv(out / "summary.csv", ("check", "value", "threshold", "pass"),
              [(c, v, th, str(ok).lower()) for c, v, th, ok in checks])
    (out / "plot_diagnostics.py").write_text(PLOT_SCRIPT.format(csv_path=str(Path(cfg.diagnostics_file))))
    return EXIT_OK, {"checks_passed": all(c[-1] for c in checks)}


COMMANDS = {
    "criteria": cmd_criteria,
    "exact": cmd_exact,
    "profile-check": cmd_profile_check,
    "scale-check": cmd_scale_check,
    "simulate": cmd_simulate,
    "diagnose": cmd_diagnose,
}


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(subcommand: str, cfg: cfgmod.RunConfig) -> int:
    """Execute ``subcommand``; write its CSV artifacts and ``manifest.json``."""
    if subcommand not in COMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    cfg.validate()
    cfg.fluid_params()
    out = cfg.output_path()
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from None
    start = time.perf_counter()
    code, notes = COMMANDS[subcommand](cfg, out)
    wall = time.perf_counter() - start
    artifacts = {p.name: _digest(p) for p in sorted(out.iterdir()) if p.is_file() and p.name != "manifest.json"}
    manifest = {
        "subcommand": subcommand,
        "config": cfg.to_dict(),
        "exit_code": code,
        "notes": notes,
        "artifacts": artifacts,
        "versions": {"cnslab": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "wall_time_s": wall,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return code


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnslab", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key = value config file or a run manifest (JSON)")
        for key in cfgmod.KEYS:
            flags = [f"--{key.replace('_', '-')}"]
            if "_" in key:
                flags.append(f"--{key}")
            if key == "lam":
                flags.append("--lambda")
            sp.add_argument(*flags, dest=key, default=None)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k in cfgmod.KEYS and v is not None}
    try:
        file_values = cfgmod.load(args.config) if args.config else {}
        cfg = cfgmod.build(file_values, overrides)
        return run(args.subcommand, cfg)
    except CNSLabError as exc:
        print(f"cnslab {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FloatingPointError, ArithmeticError) as exc:
        print(f"cnslab {args.subcommand}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

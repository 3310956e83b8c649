"""Finite-volume solver for radially symmetric barotropic compressible flow.

Evolves density and radial momentum in the reduced system

    d_t rho + r^(1-n) d_r (r^(n-1) rho u) = 0
    d_t (rho u) + r^(1-n) d_r (r^(n-1) rho u^2) + d_r (A rho^gamma) = (lam + 2 mu) d_r div u

Convective fluxes use the Rusanov (local Lax-Friedrichs) flux with signal
speed |u| + c on limited linear reconstructions of (rho, u); the pressure
gradient and the viscous term are central. Time stepping is the two-stage
strong-stability-preserving Runge-Kutta method.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics as diag
from .errors import BlowupDetected, CNSLabError, ConfigError
from .grid import BoundaryCondition, RadialGrid, State, extend_with_ghosts
from .params import FluidParams

log = logging.getLogger(__name__)

NG = 2  # ghost cells per side


@dataclass(frozen=True)
class SolverConfig:
    cfl: float = 0.4
    floor: float = 1e-10
    reconstruction: str = "linear"  # "linear" or "constant"
    limiter: str = "vanleer"  # "minmod", "vanleer" or "mc"
    dt_min: float = 1e-12
    max_steps: int = 10_000_000
    q: float = 4.0  # exponent of the density-gradient criterion norm
    p: float = 4.0  # exponent of the weighted momentum monitor
    T_ref: float | None = None  # reference time for the type-I indicator

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.reconstruction not in ("linear", "constant"):
            raise ConfigError(f"unknown reconstruction {self.reconstruction!r}")
        if self.limiter not in _LIMITERS:
            raise ConfigError(f"unknown limiter {self.limiter!r}")
        if not self.floor >= 0:
            raise ConfigError("density floor must be non-negative")


def _minmod(a, b):
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _vanleer(a, b):
    ab = a * b
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(ab > 0, 2.0 * ab / (a + b), 0.0)
    return s


def _mc(a, b):
    return np.where(
        a * b > 0,
        np.sign(a) * np.minimum(np.minimum(2 * np.abs(a), 2 * np.abs(b)), 0.5 * np.abs(a + b)),
        0.0,
    )


_LIMITERS = {"minmod": _minmod, "vanleer": _vanleer, "mc": _mc}


class RadialSolver:
    """Spatial operator and integrator bound to one grid, parameter set and boundary."""

    def __init__(self, grid: RadialGrid, params: FluidParams, bc: BoundaryCondition | None = None,
                 config: SolverConfig | None = None):
        self.grid = grid
        self.params = params
        self.bc = bc or BoundaryCondition()
        self.config = config or SolverConfig()
        self.bc.check(grid)
        n, h = params.n, grid.spacing
        self.h = h
        self.volumes = grid.volumes(n)
        self.areas = grid.face_areas(n)
        k = np.arange(-NG, grid.cell_count + NG)
        self.r_ext = grid.r_min + h * (k + 0.5)
        self._weight = self.r_ext ** (n - 1)
        rn = np.diff(self.r_ext[NG - 1:NG + grid.cell_count + 1] ** n)
        self._div_weight = n / np.where(rn != 0, rn, 1.0)
        self.floored_mass = 0.0

    def _extend(self, rho, u, t):
        return extend_with_ghosts(self.grid, self.bc, rho, u, t, NG)

    def _reconstruct(self, q):
        """Left and right face states for the N + 1 faces."""
        N = self.grid.cell_count
        cells = slice(NG - 1, NG + N + 1)  # one ghost each side
        if self.config.reconstruction == "constant":
            qc = q[cells]
            return qc[:-1], qc[1:]
        d = np.diff(q)
        slope = _LIMITERS[self.config.limiter](d[NG - 2:NG + N], d[NG - 1:NG + N + 1])
        qc = q[cells]
        return (qc + 0.5 * slope)[:-1], (qc - 0.5 * slope)[1:]

    # -- spatial operator ----------------------------------------------------------
    def sound_speed(self, rho):
        p = self.params
        return np.sqrt(p.A * p.gamma * np.maximum(rho, 0.0) ** (p.gamma - 1.0))

    def conservative_rhs(self, rho, u, t):
        """Time derivatives of density and radial momentum."""
        p, h, N = self.params, self.h, self.grid.cell_count
        re, ue = self._extend(rho, u, t)

        rl, rr = self._reconstruct(re)
        ul, ur = self._reconstruct(ue)
        ml, mr = rl * ul, rr * ur
        a = np.maximum(np.abs(ul) + self.sound_speed(rl), np.abs(ur) + self.sound_speed(rr))
        f_mass = 0.5 * (ml + mr) - 0.5 * a * (rr - rl)
        f_mom = 0.5 * (ml * ul + mr * ur) - 0.5 * a * (mr - ml)

        af = self.areas
        drho = -np.diff(af * f_mass) / self.volumes
        dm = -np.diff(af * f_mom) / self.volumes

        pe = p.A * re**p.gamma
        dm -= (pe[NG + 1:NG + N + 1] - pe[NG - 1:NG + N - 1]) / (2 * h)

        # divergence on faces from r^(n-1) u at the neighbouring centres,
        # exact for fields of constant divergence (see elliptic_flux.face_divergence)
        g = self._weight * ue
        div_f = (g[NG:NG + N + 1] - g[NG - 1:NG + N]) * self._div_weight
        if self.grid.r_min == 0.0:
            div_f[0] = p.n * ue[NG] / self.r_ext[NG]
        dm += p.nu * np.diff(div_f) / h
        return drho, dm

    def rhs(self, state: State):
        """Time derivatives ``(d_t rho, d_t u)`` of a state."""
        drho, dm = self.conservative_rhs(state.rho, state.u, state.t)
        return drho, (dm - state.u * drho) / state.rho

    # -- time stepping -------------------------------------------------------------
    def stable_dt(self, state: State) -> float:
        h, nu = self.h, self.params.nu
        speed = np.abs(state.u) + self.sound_speed(state.rho)
        with np.errstate(divide="ignore"):
            hyper = np.min(np.where(speed > 0, h / speed, np.inf))
        visc = np.min(h * h * state.rho / (2.0 * nu))
        return self.config.cfl * min(hyper, visc)

    def checked_dt(self, state: State) -> float:
        dt = self.stable_dt(state)
        if not np.isfinite(dt) or dt < self.config.dt_min:
            raise BlowupDetected(f"time step {dt:.3e} below minimum {self.config.dt_min:.1e} at t = {state.t}",
                                 last_state=state)
        return dt

    def _apply_floor(self, rho, m):
        fl = self.config.floor
        low = rho < fl
        if np.any(low):
            self.floored_mass += float(np.sum((fl - rho[low]) * self.volumes[low]))
            rho = np.where(low, fl, rho)
        return rho, m / rho

    def step(self, state: State, dt: float | None = None) -> State:
        """Advance one two-stage step; ``dt`` defaults to the stable step."""
        if dt is None:
            dt = self.checked_dt(state)
        rho0, m0, t0 = state.rho, state.momentum, state.t
        with np.errstate(all="ignore"):
            k_rho, k_m = self.conservative_rhs(rho0, state.u, t0)
            rho1, u1 = self._apply_floor(rho0 + dt * k_rho, m0 + dt * k_m)
            k_rho, k_m = self.conservative_rhs(rho1, u1, t0 + dt)
            rho2 = 0.5 * (rho0 + rho1 + dt * k_rho)
            m2 = 0.5 * (m0 + rho1 * u1 + dt * k_m)
            rho2, u2 = self._apply_floor(rho2, m2)
        new = State(rho2, u2, t0 + dt)
        if not new.is_finite():
            raise BlowupDetected(f"non-finite values after step to t = {new.t}", last_state=state)
        return new


@dataclass
class Trajectory:
    grid: RadialGrid
    params: FluidParams
    snapshots: list = field(default_factory=list)
    series: diag.DiagnosticSeries = field(default_factory=diag.DiagnosticSeries)
    floored_mass: float = 0.0
    steps: int = 0

    def snapshot_at(self, t: float, atol=1e-12) -> State:
        for s in self.snapshots:
            if abs(s.t - t) <= atol * max(1.0, abs(t)):
                return s
        raise KeyError(f"no snapshot at t = {t}")


class _Monitor:
    """Accumulates the per-step diagnostics channels of one run."""

    def __init__(self, solver: RadialSolver, series: diag.DiagnosticSeries, grad_omega=False):
        self.solver = solver
        self.series = series
        self.grad_omega = grad_omega
        self.dissipation_acc = 0.0
        self._last = None
        self.E0 = None

    def record(self, s: State):
        sol = self.solver
        grid, p, cfg = sol.grid, sol.params, sol.config
        n = p.n
        rate = diag.dissipation_rate(s, grid, p)
        if self._last is not None:
            t_prev, rate_prev = self._last
            self.dissipation_acc += 0.5 * (rate + rate_prev) * (s.t - t_prev)
        self._last = (s.t, rate)
        e_kin = diag.kinetic_energy(s, grid, n)
        e_pot = diag.potential_energy(s, grid, p)
        if self.E0 is None:
            self.E0 = e_kin + e_pot
        norms = diag.criterion_norms(s, grid, n, cfg.q)
        max_divu = diag.max_divergence(s, grid, n)
        values = dict(
            mass=diag.mass(s, grid, n),
            e_kin=e_kin,
            e_pot=e_pot,
            dissipation_acc=self.dissipation_acc,
            balance_residual=e_kin + e_pot + self.dissipation_acc - self.E0,
            max_rho=float(np.max(s.rho)),
            max_divu=max_divu,
            grad_rho_lq=norms.grad_rho_lq,
            grad_u_l2=norms.grad_u_l2,
            weighted_lp=diag.weighted_momentum_lp(s, grid, n, cfg.p),
            floored_mass_acc=sol.floored_mass,
        )
        if cfg.T_ref is not None and s.t < cfg.T_ref:
            values["type1_indicator"] = max_divu * (cfg.T_ref - s.t)
        if self.grad_omega:
            from .elliptic_flux import effective_flux, grad_omega_l2, solve_lame_radial

            field_ = solve_lame_radial(s.rho, grid, p, bounded=sol.bc.outer == "wall")
            values["grad_omega_l2"] = grad_omega_l2(effective_flux(s.u, field_), grid, n)
        self.series.append(s.t, **values)


def simulate(initial: State, grid: RadialGrid, params: FluidParams, bc: BoundaryCondition | None = None,
             t_end: float = 1.0, snapshot_times=None, config: SolverConfig | None = None,
             record_every_step: bool = True, grad_omega: bool = False) -> Trajectory:
    """Advance ``initial`` to ``t_end``.

    Steps are shortened to land exactly on every requested snapshot time; with
    ``record_every_step`` every accepted state is also kept as a snapshot.
    On failure :class:`BlowupDetected` carries the last healthy state and the
    partial trajectory.
    """
    if not t_end > initial.t:
        raise ConfigError(f"t_end = {t_end} must exceed the initial time {initial.t}")
    bc = bc or BoundaryCondition()
    bc.check(grid, t_end)
    solver = RadialSolver(grid, params, bc, config)
    requested = () if snapshot_times is None else snapshot_times
    targets = sorted({float(x) for x in requested if initial.t < x < t_end} | {float(t_end)})
    traj = Trajectory(grid, params)
    traj.series.metadata.update(params=params, grid=grid)
    mon = _Monitor(solver, traj.series, grad_omega)

    state = initial.copy()
    state.rho, _ = solver._apply_floor(state.rho, state.rho * state.u)
    traj.snapshots.append(state)
    mon.record(state)
    for target in targets:
        while state.t < target:
            if traj.steps >= solver.config.max_steps:
                raise CNSLabError(f"step budget {solver.config.max_steps} exhausted at t = {state.t}")
            try:
                dt = solver.checked_dt(state)
                land = state.t + dt * (1.0 + 1e-9) >= target
                if land:
                    dt = target - state.t
                state = solver.step(state, dt)
            except BlowupDetected as exc:
                traj.floored_mass = solver.floored_mass
                exc.trajectory = traj
                raise
            if land:
                state.t = target
            traj.steps += 1
            traj.floored_mass = solver.floored_mass
            if land or record_every_step:
                traj.snapshots.append(state)
                mon.record(state)
    return traj

"""Scaling symmetry of the barotropic system.

For ``kappa > 0`` the map

    rho_k(t, x) = kappa^(1/gamma)           rho(kappa t, kappa^((gamma+1)/(2gamma)) x)
    u_k(t, x)   = kappa^((gamma-1)/(2gamma)) u(kappa t, kappa^((gamma+1)/(2gamma)) x)

sends solutions to solutions. This module applies it to closed forms and to
discrete snapshots, and checks it numerically by re-simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, OutOfDomain
from .grid import BoundaryCondition, RadialGrid, State, extend_with_ghosts


@dataclass(frozen=True)
class ScalingTransform:
    kappa: float
    gamma: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConfigError(f"scaling factor must be positive, got {self.kappa}")

    @property
    def space_exponent(self) -> float:
        return (self.gamma + 1.0) / (2.0 * self.gamma)

    @property
    def density_factor(self) -> float:
        return self.kappa ** (1.0 / self.gamma)

    @property
    def velocity_factor(self) -> float:
        return self.kappa ** ((self.gamma - 1.0) / (2.0 * self.gamma))

    @property
    def space_factor(self) -> float:
        return self.kappa**self.space_exponent

    def then(self, other: "ScalingTransform") -> "ScalingTransform":
        return ScalingTransform(self.kappa * other.kappa, self.gamma)

    def inverse(self) -> "ScalingTransform":
        return ScalingTransform(1.0 / self.kappa, self.gamma)


def transform_point(s: ScalingTransform, t, x):
    """Arguments ``(kappa t, kappa^a x)`` at which the original solution is read."""
    return s.kappa * np.asarray(t, dtype=float), s.space_factor * np.asarray(x, dtype=float)


def transform_closed_form(s: ScalingTransform, rho_fn, u_fn):
    """Scaled versions of ``rho_fn(t, x)`` and ``u_fn(t, x)``."""

    def rho_k(t, x):
        tt, xx = transform_point(s, t, x)
        return s.density_factor * rho_fn(tt, xx)

    def u_k(t, x):
        tt, xx = transform_point(s, t, x)
        return s.velocity_factor * u_fn(tt, xx)

    return rho_k, u_k


class ScaledSnapshot(NamedTuple):
    state: State
    grid: RadialGrid
    interpolation_error: float  # target spacing ** order
    extrapolated: bool


def scaled_grid(s: ScalingTransform, grid: RadialGrid, cell_count: int | None = None) -> RadialGrid:
    """Image of ``grid`` under the transform; cell count defaults to matched spacing."""
    f = 1.0 / s.space_factor
    if cell_count is None:
        cell_count = max(2, int(round(grid.cell_count * f)))
    return RadialGrid(grid.r_min * f, grid.r_max * f, cell_count)


def transform_snapshot(s: ScalingTransform, grid: RadialGrid, state: State, target: RadialGrid,
                       order: int = 3, bc: BoundaryCondition | None = None) -> ScaledSnapshot:
    """Transformed discrete fields at time ``t / kappa`` on the ``target`` grid.

    Source data are padded with ghost cells from ``bc`` and interpolated
    (``order`` 1: piecewise linear, 3: cubic spline).
    """
    if order not in (1, 3):
        raise ConfigError(f"interpolation order must be 1 or 3, got {order}")
    bc = bc or BoundaryCondition()
    r_tgt = target.centers
    r_src = s.space_factor * r_tgt
    tol = 1e-12 * grid.r_max
    if r_src.min() < grid.r_min - tol or r_src.max() > grid.r_max + tol:
        raise OutOfDomain(
            f"target needs source data on [{r_src.min():.6g}, {r_src.max():.6g}], "
            f"snapshot covers [{grid.r_min:.6g}, {grid.r_max:.6g}]"
        )
    t_new = state.t / s.kappa
    if np.array_equal(r_src, grid.centers):
        rho, u = state.rho.copy(), state.u.copy()
        extrapolated = False
    else:
        ng = 2
        re, ue = extend_with_ghosts(grid, bc, state.rho, state.u, state.t, ng)
        h = grid.spacing
        r_ext = grid.r_min + h * (np.arange(-ng, grid.cell_count + ng) + 0.5)
        if order == 3:
            rho = CubicSpline(r_ext, re)(r_src)
            u = CubicSpline(r_ext, ue)(r_src)
        else:
            rho = np.interp(r_src, r_ext, re)
            u = np.interp(r_src, r_ext, ue)
        c = grid.centers
        extrapolated = bool(r_src.min() < c[0] or r_src.max() > c[-1])
    if s.kappa != 1.0:
        rho = s.density_factor * rho
        u = s.velocity_factor * u
    return ScaledSnapshot(State(rho, u, t_new), target, target.spacing**order, extrapolated)


class InvarianceReport(NamedTuple):
    kappa: float
    cells: int
    target_cells: int
    l1_rho: float
    l1_u: float
    max_rho: float
    max_u: float


def _scaled_bc(s: ScalingTransform, bc: BoundaryCondition) -> BoundaryCondition:
    if bc.exact is None:
        return bc
    # the explicit blowup family maps to itself with T -> T / kappa
    exact = replace(bc.exact, T=bc.exact.T / s.kappa)
    return BoundaryCondition(bc.inner, bc.outer, exact)


def invariance_check_numeric(s: ScalingTransform, params, grid: RadialGrid, initial: State, t1: float,
                             t2: float, config=None, bc: BoundaryCondition | None = None,
                             target_cells: int | None = None, order: int = 3) -> InvarianceReport:
    """Compare a rescaled re-simulation with the rescaled original run.

    Run A goes from ``initial`` to ``t2``. Its ``t1`` snapshot is transformed
    onto the scaled grid and run B advances it to ``t2 / kappa``; the result
    is compared with the transformed ``t2`` snapshot of run A.
    """
    from .solver import simulate

    if not t2 > t1 > initial.t:
        raise ConfigError(f"need t2 > t1 > t0, got t0={initial.t}, t1={t1}, t2={t2}")
    if s.gamma != params.gamma:
        raise ConfigError("transform and fluid parameters disagree on gamma")
    bc = bc or BoundaryCondition()
    run_a = simulate(initial, grid, params, bc, t2, snapshot_times=[t1], config=config, record_every_step=False)
    snap1 = run_a.snapshot_at(t1)
    snap2 = run_a.snapshot_at(t2)
    target = scaled_grid(s, grid, target_cells)
    bc_b = _scaled_bc(s, bc)
    start = transform_snapshot(s, grid, snap1, target, order, bc).state
    run_b = simulate(start, target, params, bc_b, t2 / s.kappa, config=config, record_every_step=False)
    reference = transform_snapshot(s, grid, snap2, target, order, bc).state
    got = run_b.snapshots[-1]
    V = target.volumes(params.n)
    d_rho = np.abs(got.rho - reference.rho)
    d_u = np.abs(got.u - reference.u)
    return InvarianceReport(
        s.kappa, grid.cell_count, target.cell_count,
        float(np.sum(d_rho * V)), float(np.sum(d_u * V)), float(d_rho.max()), float(d_u.max()),
    )

"""Radial Lame solve ``L v = A grad rho^gamma`` and the effective viscous flux ``omega = u - v``.

For radial curl-free fields ``L v = (lam + 2 mu) grad div v``, so the vector
problem collapses to ``(lam + 2 mu) div v = A rho^gamma + c`` with a gauge
constant ``c``, and ``v`` follows by one radial quadrature:

    v(r) = r^(1-n) / (lam + 2 mu) * int_{r_min}^r s^(n-1) (A rho^gamma + c) ds
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import gradient_l2_squared
from .errors import GridMismatch, OriginDivergence, QuadratureFailure
from .grid import RadialGrid
from .params import FluidParams


@dataclass(frozen=True)
class CompensatedField:
    v: np.ndarray
    c_gauge: float
    grid: RadialGrid
    omega: np.ndarray | None = None
    truncation_error: float = 0.0  # v at r_max for whole-space runs


def solve_lame_pressure(pressure, grid: RadialGrid, params: FluidParams, bounded=True) -> CompensatedField:
    """Lame solve for a given cell-centred pressure field ``A rho^gamma``.

    ``bounded`` imposes v = 0 on both radii (the inner one only matters for an
    annulus); otherwise the whole-space gauge ``c = 0`` is used.
    """
    P = np.asarray(pressure, dtype=float)
    if P.shape != grid.centers.shape:
        raise GridMismatch(f"pressure has shape {P.shape}, grid has {grid.cell_count} cells")
    if not np.all(np.isfinite(P)):
        raise QuadratureFailure("non-finite pressure samples")
    n = params.n
    faces, r = grid.faces, grid.centers
    # g = r^(n-1) v; consecutive differences integrate s^(n-1) (P + c) with P
    # averaged onto the interior faces, matching the solver's face divergence
    w = np.diff(r**n) / n
    Pf = 0.5 * (P[1:] + P[:-1])
    first = (r[0] ** n - faces[0] ** n) / n
    last = (faces[-1] ** n - r[-1] ** n) / n
    g_p = np.concatenate([[first * P[0]], first * P[0] + np.cumsum(w * Pf)])
    g_c = np.concatenate([[first], first + np.cumsum(w)])
    wall_p = g_p[-1] + last * P[-1]
    wall_c = g_c[-1] + last
    c = -wall_p / wall_c if bounded else 0.0
    v = (g_p + c * g_c) / (params.nu * r ** (n - 1))
    trunc = 0.0 if bounded else float((wall_p + c * wall_c) / (params.nu * faces[-1] ** (n - 1)))
    return CompensatedField(v=v, c_gauge=float(c), grid=grid, truncation_error=trunc)


def solve_lame_radial(rho, grid: RadialGrid, params: FluidParams, bounded=True, u=None) -> CompensatedField:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise QuadratureFailure("negative density")
    field = solve_lame_pressure(params.A * rho**params.gamma, grid, params, bounded)
    if u is not None:
        field = CompensatedField(field.v, field.c_gauge, grid, effective_flux(u, field), field.truncation_error)
    return field


def effective_flux(u, field: CompensatedField) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != field.v.shape:
        raise GridMismatch(f"velocity has shape {u.shape}, compensated field has {field.v.shape}")
    return u - field.v


def face_divergence(r, v, n):
    """Divergence of ``v e_r`` on the faces between consecutive centres ``r``.

    Uses ``n (r_b^(n-1) v_b - r_a^(n-1) v_a) / (r_b^n - r_a^n)``, exact for
    fields with constant divergence; the solver uses the same operator.
    """
    return n * np.diff(r ** (n - 1) * v) / np.diff(r**n)


def lame_residual(v, pressure, grid: RadialGrid, params: FluidParams) -> np.ndarray:
    """``nu d_r(r^(1-n) d_r(r^(n-1) v)) - d_r P`` on interior cells (central differences)."""
    n, h = params.n, grid.spacing
    r = grid.centers
    div_faces = face_divergence(r, v, n)
    lhs = params.nu * np.diff(div_faces) / h
    P = np.asarray(pressure, dtype=float)
    rhs = (P[2:] - P[:-2]) / (2 * h)
    return lhs - rhs


def grad_omega_l2(omega, grid: RadialGrid, n: int) -> float:
    """``||grad omega||_{L^2}`` of the radial field ``omega(r) e_r``."""
    omega = np.asarray(omega, dtype=float)
    if grid.r_min == 0.0:
        at_origin = 1.5 * omega[0] - 0.5 * omega[1]
        scale = max(float(np.max(np.abs(omega))), 1e-300)
        if abs(at_origin) > 10 * grid.spacing * scale:
            raise OriginDivergence(f"omega(0) ~ {at_origin:.3e} != 0 makes omega^2/r^2 non-integrable")
    return math.sqrt(gradient_l2_squared(omega, grid, n))


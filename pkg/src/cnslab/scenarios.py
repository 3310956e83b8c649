"""Named initial/boundary set-ups shared by the CLI, scripts and tests."""

from __future__ import annotations

import csv

import numpy as np

from .exact_solution import ExactBlowup
from .grid import BoundaryCondition, RadialGrid, State, sample_exact


def gaussian_bump(grid: RadialGrid, background=1.0, amplitude=0.5, width=0.2) -> State:
    r = grid.centers
    return State(background + amplitude * np.exp(-((r / width) ** 2)), np.zeros_like(r), 0.0)


def rest(grid: RadialGrid, background=1.0) -> State:
    return State(np.full(grid.cell_count, float(background)), np.zeros(grid.cell_count), 0.0)


def from_file(grid: RadialGrid, path) -> State:
    """Initial data from a CSV with columns ``r, rho, u``, interpolated onto the grid."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    r = np.array([float(x["r"]) for x in rows])
    order = np.argsort(r)
    rho = np.array([float(x["rho"]) for x in rows])[order]
    u = np.array([float(x["u"]) for x in rows])[order]
    r = r[order]
    return State(np.interp(grid.centers, r, rho), np.interp(grid.centers, r, u), 0.0)


def build(cfg, grid: RadialGrid | None = None):
    """``(grid, initial state, boundary condition)`` for a :class:`RunConfig`."""
    params = cfg.fluid_params()
    grid = grid or RadialGrid(cfg.r_min, cfg.r_max, cfg.cells)
    exact = None
    if cfg.scenario == "exact-forced":
        exact = ExactBlowup(cfg.T, params)
        default_inner = "exact" if grid.r_min > 0 else "wall"
        default_outer = "exact"
        initial = sample_exact(grid, exact, 0.0)
    else:
        default_inner = default_outer = "wall"
        if cfg.scenario == "rest":
            initial = rest(grid, cfg.background)
        elif cfg.scenario == "gaussian-bump":
            initial = gaussian_bump(grid, cfg.background, cfg.amplitude, cfg.width)
        else:
            initial = from_file(grid, cfg.initial_file)
    bc = BoundaryCondition(cfg.bc_inner or default_inner, cfg.bc_outer or default_outer, exact)
    return grid, initial, bc

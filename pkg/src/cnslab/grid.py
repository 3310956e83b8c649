"""Radial cell-centred grids, discrete states and boundary descriptions."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import ConfigError, GridMismatch
from .profile import sphere_area

BOUNDARY_KINDS = ("wall", "exact", "outflow")


@dataclass(frozen=True)
class RadialGrid:
    """Uniform cells on ``[r_min, r_max]``; ``r_min = 0`` is a full ball."""

    r_min: float
    r_max: float
    cell_count: int

    def __post_init__(self):
        if not (self.r_min >= 0 and self.r_max > self.r_min):
            raise ConfigError(f"need 0 <= r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if int(self.cell_count) != self.cell_count or self.cell_count < 2:
            raise ConfigError(f"cell_count must be an integer >= 2, got {self.cell_count}")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / self.cell_count

    @cached_property
    def faces(self) -> np.ndarray:
        return self.r_min + self.spacing * np.arange(self.cell_count + 1)

    @cached_property
    def centers(self) -> np.ndarray:
        return self.r_min + self.spacing * (np.arange(self.cell_count) + 0.5)

    def volumes(self, n: int) -> np.ndarray:
        """Exact n-dimensional volumes of the spherical shells."""
        f = self.faces
        return sphere_area(n) * (f[1:] ** n - f[:-1] ** n) / n

    def face_areas(self, n: int) -> np.ndarray:
        return sphere_area(n) * self.faces ** (n - 1)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return replace(self, cell_count=self.cell_count * factor)

    def check_same(self, other: "RadialGrid") -> None:
        if self != other:
            raise GridMismatch(f"grids differ: {self} vs {other}")


@dataclass
class State:
    """Cell densities, radial velocities and the time they belong to."""

    rho: np.ndarray
    u: np.ndarray
    t: float = 0.0

    def copy(self) -> "State":
        return State(self.rho.copy(), self.u.copy(), float(self.t))

    @property
    def momentum(self) -> np.ndarray:
        return self.rho * self.u

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.u)) and np.isfinite(self.t))


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary kinds at the inner and outer radius.

    ``wall`` imposes u = 0 (and is the symmetry condition at r = 0),
    ``exact`` fills ghost cells from ``exact`` (an :class:`ExactBlowup`),
    ``outflow`` copies the boundary cell.
    """

    inner: str = "wall"
    outer: str = "wall"
    exact: object = field(default=None, compare=False)

    def __post_init__(self):
        for side in (self.inner, self.outer):
            if side not in BOUNDARY_KINDS:
                raise ConfigError(f"unknown boundary kind {side!r}")
        if "exact" in (self.inner, self.outer) and self.exact is None:
            raise ConfigError("exact-forced boundary needs an ExactBlowup solution")

    def check(self, grid: RadialGrid, t_end: float | None = None) -> None:
        if grid.r_min == 0 and self.inner == "outflow":
            raise ConfigError("the origin admits only the symmetry (wall) or exact condition")
        if self.exact is not None and t_end is not None and not t_end < self.exact.T:
            raise ConfigError(f"exact forcing needs T = {self.exact.T} beyond the horizon {t_end}")


def extend_with_ghosts(grid: RadialGrid, bc: BoundaryCondition, rho, u, t, ng=2):
    """Cell data padded with ``ng`` ghost cells per side according to ``bc``."""
    N, h = grid.cell_count, grid.spacing
    re = np.empty(N + 2 * ng)
    ue = np.empty(N + 2 * ng)
    re[ng:ng + N] = rho
    ue[ng:ng + N] = u
    k = np.arange(ng)
    sides = (
        (bc.inner, k, ng + ng - 1 - k, ng, grid.r_min - h * (ng - k - 0.5)),
        (bc.outer, ng + N + k, ng + N - 1 - k, ng + N - 1, grid.r_max + h * (k + 0.5)),
    )
    for kind, ghost, mirror, edge, r in sides:
        if kind == "wall":
            re[ghost] = re[mirror]
            ue[ghost] = -ue[mirror]
        elif kind == "outflow":
            re[ghost] = re[edge]
            ue[ghost] = ue[edge]
        else:
            re[ghost] = bc.exact.rho_radial(t, r)
            ue[ghost] = bc.exact.u_radial(t, r)
    return re, ue


def sample_exact(grid: RadialGrid, exact, t: float) -> State:
    r = grid.centers
    return State(exact.rho_radial(t, r), exact.u_radial(t, r), float(t))


def radial_derivative(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Second-order radial derivative of cell-centred data."""
    return np.gradient(f, grid.spacing, edge_order=2)

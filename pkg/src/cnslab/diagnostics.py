"""Monitored quantities: conservation, energy balances, blowup indicators and rate fits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateGamma, FitDegenerate, WrongGamma
from .grid import RadialGrid, State, radial_derivative

STEP_COLUMNS = (
    "t", "mass", "e_kin", "e_pot", "dissipation_acc", "balance_residual", "max_rho",
    "max_divu", "type1_indicator", "grad_rho_lq", "grad_u_l2", "weighted_lp", "floored_mass_acc",
)


@dataclass
class DiagnosticSeries:
    """Named scalar channels of ``(t, value)`` pairs, strictly increasing in t."""

    metadata: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)

    def append(self, t: float, **values) -> None:
        for name, value in values.items():
            ch = self.channels.setdefault(name, ([], []))
            if ch[0] and not t > ch[0][-1]:
                raise ValueError(f"channel {name!r}: time {t} does not increase past {ch[0][-1]}")
            ch[0].append(float(t))
            ch[1].append(float(value))

    def times(self, name: str) -> np.ndarray:
        return np.asarray(self.channels[name][0])

    def values(self, name: str) -> np.ndarray:
        return np.asarray(self.channels[name][1])

    def __contains__(self, name) -> bool:
        return name in self.channels

    def __len__(self) -> int:
        return max((len(c[0]) for c in self.channels.values()), default=0)

    def nonfinite(self) -> list:
        return [k for k, (_, v) in self.channels.items() if not np.all(np.isfinite(v))]

    def to_csv(self, path, columns=None) -> None:
        """One row per distinct time; channels missing at a time are left empty."""
        names = list(columns or self.channels)
        names = [c for c in names if c != "t"]
        rows: dict = {}
        for name in names:
            if name not in self.channels:
                continue
            for t, v in zip(*self.channels[name]):
                rows.setdefault(t, {})[name] = v
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", *names])
            for t in sorted(rows):
                w.writerow([repr(t), *(repr(rows[t][c]) if c in rows[t] else "" for c in names)])

    @classmethod
    def from_csv(cls, path) -> "DiagnosticSeries":
        series = cls()
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                t = float(row.pop("t"))
                series.append(t, **{k: float(v) for k, v in row.items() if v != ""})
        return series


# --- integrals over a snapshot -------------------------------------------------------

def mass(state: State, grid: RadialGrid, n: int) -> float:
    return float(np.sum(state.rho * grid.volumes(n)))


def kinetic_energy(state: State, grid: RadialGrid, n: int) -> float:
    return float(0.5 * np.sum(state.rho * state.u**2 * grid.volumes(n)))


def potential_energy(state: State, grid: RadialGrid, params) -> float:
    """``A/(gamma-1) int rho^gamma``; for gamma = 1 the isothermal ``A int rho log rho``."""
    V = grid.volumes(params.n)
    if params.gamma == 1.0:
        rho = state.rho
        return float(params.A * np.sum(np.where(rho > 0, rho * np.log(np.where(rho > 0, rho, 1.0)), 0.0) * V))
    return float(params.A / (params.gamma - 1.0) * np.sum(state.rho**params.gamma * V))


def divergence(u: np.ndarray, grid: RadialGrid, n: int) -> np.ndarray:
    return radial_derivative(u, grid) + (n - 1) * u / grid.centers


def gradient_l2_squared(w: np.ndarray, grid: RadialGrid, n: int) -> float:
    """``int |grad w|^2`` of the radial field ``w(r) e_r``: integrand w'^2 + (n-1) w^2 / r^2."""
    r = grid.centers
    dw = radial_derivative(w, grid)
    return float(np.sum((dw**2 + (n - 1) * w**2 / r**2) * grid.volumes(n)))


def dissipation_rate(state: State, grid: RadialGrid, params) -> float:
    """``int mu |grad u|^2 + (lam + mu) (div u)^2``."""
    n = params.n
    div = divergence(state.u, grid, n)
    return params.mu * gradient_l2_squared(state.u, grid, n) + (params.lam + params.mu) * float(
        np.sum(div**2 * grid.volumes(n))
    )


class CriterionNorms(NamedTuple):
    grad_rho_lq: float
    grad_u_l2: float


def criterion_norms(state: State, grid: RadialGrid, n: int, q: float) -> CriterionNorms:
    """``||d_r rho||_{L^q}`` and ``||grad u||_{L^2}`` of a radial snapshot."""
    V = grid.volumes(n)
    drho = radial_derivative(state.rho, grid)
    return CriterionNorms(
        float(np.sum(np.abs(drho) ** q * V) ** (1.0 / q)),
        math.sqrt(gradient_l2_squared(state.u, grid, n)),
    )


def weighted_momentum_lp(state: State, grid: RadialGrid, n: int, p: float) -> float:
    return float(np.sum(state.rho * np.abs(state.u) ** p * grid.volumes(n)))


def max_divergence(state: State, grid: RadialGrid, n: int) -> float:
    return float(np.max(np.abs(divergence(state.u, grid, n))))


# --- trajectory channels -------------------------------------------------------------

def _trapezoid_cumulative(t, f):
    t, f = np.asarray(t, float), np.asarray(f, float)
    out = np.zeros_like(f)
    if len(f) > 1:
        out[1:] = np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(t))
    return out


def energy_balance(trajectory, params) -> np.ndarray:
    """``E(t) + int_0^t dissipation - E(0)`` at each snapshot of ``trajectory``.

    Dissipation is integrated in time by the trapezoid rule over the snapshot
    times, so snapshots should be dense (every step is recorded by ``simulate``).
    """
    if params.gamma == 1.0:
        raise DegenerateGamma("use isothermal_balance for gamma = 1")
    grid = trajectory.grid
    snaps = trajectory.snapshots
    t = [s.t for s in snaps]
    E = np.array([kinetic_energy(s, grid, params.n) + potential_energy(s, grid, params) for s in snaps])
    D = _trapezoid_cumulative(t, [dissipation_rate(s, grid, params) for s in snaps])
    return E + D - E[0]


def dissipation_accumulated(trajectory, params) -> np.ndarray:
    grid = trajectory.grid
    snaps = trajectory.snapshots
    return _trapezoid_cumulative([s.t for s in snaps], [dissipation_rate(s, grid, params) for s in snaps])


class IsothermalBalance(NamedTuple):
    identity_residual: np.ndarray
    bound_slack: np.ndarray


def isothermal_balance(trajectory, params) -> IsothermalBalance:
    """Kinetic-energy identity and its upper bound for gamma = 1.

    The bound is taken as ``1/2 int rho0 u0^2 + A^2 ||rho||_1 / (2 (lam+mu)) int_0^t ||rho||_inf``;
    the initial kinetic energy vanishes for data at rest.
    """
    if params.gamma != 1.0:
        raise WrongGamma(f"isothermal balance needs gamma = 1, got {params.gamma}")
    grid, n, A = trajectory.grid, params.n, params.A
    lm = params.lam + params.mu
    V = grid.volumes(n)
    snaps = trajectory.snapshots
    t = [s.t for s in snaps]
    kin = np.array([kinetic_energy(s, grid, n) for s in snaps])
    grad2 = np.array([gradient_l2_squared(s.u, grid, n) for s in snaps])
    divs = [divergence(s.u, grid, n) for s in snaps]
    div2 = np.array([np.sum(d**2 * V) for d in divs])
    work = np.array([np.sum(s.rho * d * V) for s, d in zip(snaps, divs)])
    l1 = np.array([np.sum(s.rho * V) for s in snaps])
    linf = np.array([np.max(s.rho) for s in snaps])

    lhs = kin + params.mu * _trapezoid_cumulative(t, grad2) + 0.5 * lm * _trapezoid_cumulative(t, div2)
    rhs = kin[0] + A * _trapezoid_cumulative(t, work) - 0.5 * lm * _trapezoid_cumulative(t, div2)
    bound = kin[0] + A**2 / (2 * lm) * _trapezoid_cumulative(t, l1 * linf)
    return IsothermalBalance(lhs - rhs, bound - rhs)


def type1_indicator(trajectory, T_ref: float) -> np.ndarray:
    """``max |div u| (T_ref - t)`` per snapshot."""
    grid, n = trajectory.grid, trajectory.params.n
    t = np.array([s.t for s in trajectory.snapshots])
    if np.any(t >= T_ref):
        raise ValueError(f"reference time {T_ref} must exceed every snapshot time")
    return np.array([max_divergence(s, grid, n) for s in trajectory.snapshots]) * (T_ref - t)


# --- blowup rate fit -----------------------------------------------------------------

@dataclass(frozen=True)
class RateFit:
    kappa_hat: float
    T_hat: float
    M_hat: float
    residual: float  # R^2 of the log-log regression at T_hat
    window: tuple


def _loglog_fit(t, y, T):
    x = -np.log(T - t)
    ly = np.log(y)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    res = ly - A @ coef
    return coef, float(res @ res), ly


def density_rate_fit(t, rho_max, window=None, min_samples=8, bracket_factor=10.0) -> RateFit:
    """Fit ``rho_max ~ M / (T - t)^kappa`` jointly in ``(kappa, T, M)``.

    For each trial ``T`` the exponent and prefactor come from linear least
    squares in log-log form; ``T`` itself is searched by bounded golden-section
    minimisation of the residual on ``(t_last, t_last + bracket_factor * window length)``.
    """
    t = np.asarray(t, float)
    y = np.asarray(rho_max, float)
    if window is not None:
        keep = (t >= window[0]) & (t <= window[1])
        t, y = t[keep], y[keep]
    if len(t) < min_samples:
        raise FitDegenerate(f"need at least {min_samples} samples, got {len(t)}")
    if np.any(np.diff(y) <= 0) or np.any(y <= 0):
        raise FitDegenerate("maximum density is not strictly increasing on the window")
    t_last = t[-1]
    length = t[-1] - t[0]
    lo, hi = t_last, t_last + bracket_factor * length
    eps = 1e-12 * max(length, 1.0)

    def objective(logdist):
        return _loglog_fit(t, y, t_last + math.exp(logdist))[1]

    # search the distance T - t_last on a log scale; a coarse scan guards the bracket
    grid = np.linspace(math.log(eps + 1e-9 * length), math.log(hi - lo), 60)
    vals = [objective(g) for g in grid]
    k = int(np.argmin(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    opt = minimize_scalar(objective, bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    T_hat = t_last + math.exp(opt.x)
    (kappa, logM), sse, ly = _loglog_fit(t, y, T_hat)
    sst = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - sse / sst if sst > 0 else 1.0
    return RateFit(float(kappa), float(T_hat), float(math.exp(logM)), float(r2), (float(t[0]), float(t[-1])))

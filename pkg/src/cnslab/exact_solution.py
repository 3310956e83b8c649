"""Closed-form type-II blowup solution with linear velocity and power-law density.

    rho(t, x) = C_n**(1/(gamma-1)) * (|x| / (T - t))**(2/(gamma-1))
    u(t, x)   = -2 x / ([n (gamma - 1) + 2] (T - t))

Points ``x`` are arrays whose last axis has length ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateGamma, EvaluationPastBlowup, OriginSingularity
from .params import FluidParams

ORIGIN_EXCLUSION = 1e-6


def blowup_constant(params: FluidParams) -> float:
    g, A = params.gamma, params.A
    if g <= 1.0:
        raise DegenerateGamma(f"blowup constant needs gamma > 1, got {g}")
    if params.n == 2:
        return (g - 1.0) ** 2 / (2.0 * A * g**3)
    return 3.0 * (g - 1.0) ** 2 / (A * g * (3.0 * g - 1.0) ** 2)


def similarity_slope(params: FluidParams) -> float:
    """Slope beta of the linear velocity, ``-2 / (n (gamma - 1) + 2)``."""
    return -2.0 / (params.n * (params.gamma - 1.0) + 2.0)


class Residual(NamedTuple):
    r_mass: np.ndarray
    r_momentum: np.ndarray
    fd_discrepancy: float | None = None


@dataclass(frozen=True)
class ExactBlowup:
    T: float
    params: FluidParams

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"blowup time must be positive, got {self.T}")
        if self.params.gamma <= 1.0:
            raise DegenerateGamma("the explicit solution requires gamma > 1")

    @property
    def C(self) -> float:
        return blowup_constant(self.params)

    @property
    def beta(self) -> float:
        return similarity_slope(self.params)

    @property
    def density_exponent(self) -> float:
        return 2.0 / (self.params.gamma - 1.0)

    def _tau(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t >= self.T):
            raise EvaluationPastBlowup(f"t = {np.max(t)} is not before blowup time T = {self.T}")
        return self.T - t

    # radial profiles, used for grid sampling and boundary forcing
    def rho_radial(self, t, r):
        tau = self._tau(t)
        e = self.density_exponent
        return self.C ** (1.0 / (self.params.gamma - 1.0)) * (np.abs(r) / tau) ** e

    def u_radial(self, t, r):
        return self.beta * np.asarray(r, dtype=float) / self._tau(t)

    def rho_t_radial(self, t, r):
        return self.density_exponent * self.rho_radial(t, r) / self._tau(t)

    def u_t_radial(self, t, r):
        return self.beta * np.asarray(r, dtype=float) / self._tau(t) ** 2

    def evaluate(self, t, x):
        """Return ``(rho, u)`` at time ``t`` and points ``x`` of shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        tau = self._tau(t)
        rho = self.rho_radial(t, r)
        u = self.beta * x / np.expand_dims(tau, -1)
        return rho, u

    def _derivatives(self, t, x):
        g, n = self.params.gamma, self.params.n
        x = np.asarray(x, dtype=float)
        tau = np.expand_dims(self._tau(t), -1)
        r = np.linalg.norm(x, axis=-1, keepdims=True)
        e = self.density_exponent
        K = self.C ** (1.0 / (g - 1.0))
        beta = self.beta

        rho = K * (r / tau) ** e
        rho_t = e * rho / tau
        grad_rho = K * e * r ** (e - 2.0) * x * tau ** (-e)
        grad_p = self.params.A * K**g * e * g * r ** (e * g - 2.0) * x * tau ** (-e * g)
        u = beta * x / tau
        u_t = beta * x / tau**2
        jac_u = beta / tau  # grad u = (beta / tau) * identity
        div_u = n * beta / tau
        lap_u = np.zeros_like(x)
        grad_div_u = np.zeros_like(x)
        return dict(rho=rho, rho_t=rho_t, grad_rho=grad_rho, grad_p=grad_p, u=u, u_t=u_t,
                    jac_u=jac_u, div_u=div_u, lap_u=lap_u, grad_div_u=grad_div_u)

    def residual(self, t, x, h_fd=None, exclusion=ORIGIN_EXCLUSION) -> Residual:
        """Pointwise residuals of the mass and momentum equations.

        With ``h_fd`` the analytic derivatives are also compared against
        central finite differences; the largest discrepancy is returned.
        """
        x = np.asarray(x, dtype=float)
        p = self.params
        r = np.linalg.norm(x, axis=-1)
        if self.density_exponent < 2.0 and np.any(r < exclusion):
            raise OriginSingularity(
                f"density exponent {self.density_exponent:g} < 2: pressure gradient "
                "is not differentiable at the origin"
            )
        d = self._derivatives(t, x)
        r_mass = d["rho_t"][..., 0] + np.sum(d["grad_rho"] * d["u"], axis=-1) + d["rho"][..., 0] * d["div_u"][..., 0]
        accel = d["u_t"] + d["jac_u"] * d["u"]
        r_mom = d["rho"] * accel + d["grad_p"] - p.mu * d["lap_u"] - (p.lam + p.mu) * d["grad_div_u"]
        disc = None
        if h_fd is not None:
            disc = self._fd_discrepancy(t, x, h_fd, d)
        return Residual(r_mass, r_mom, disc)

    def _fd_discrepancy(self, t, x, h, d) -> float:
        t = np.asarray(t, dtype=float)
        n = x.shape[-1]
        worst = 0.0
        rp, up = self.evaluate(t + h, x)
        rm, um = self.evaluate(t - h, x)
        worst = max(worst, np.max(np.abs((rp - rm) / (2 * h) - d["rho_t"][..., 0])))
        worst = max(worst, np.max(np.abs((up - um) / (2 * h) - d["u_t"])))
        g = self.params.gamma
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            rp, up = self.evaluate(t, x + e)
            rm, um = self.evaluate(t, x - e)
            worst = max(worst, np.max(np.abs((rp - rm) / (2 * h) - d["grad_rho"][..., k])))
            fd_p = self.params.A * (rp**g - rm**g) / (2 * h)
            worst = max(worst, np.max(np.abs(fd_p - d["grad_p"][..., k])))
            jac_col = np.zeros_like(d["u"])
            jac_col[..., k] = d["jac_u"][..., 0]
            worst = max(worst, np.max(np.abs((up - um) / (2 * h) - jac_col)))
        return float(worst)

    def divu_rate(self, t) -> float:
        """``|div u| (T - t)``, which is independent of ``t``."""
        tau = self._tau(t)
        return float(abs(self.params.n * self.beta / tau) * tau)

"""Self-similar profiles (Theta, V) in the similarity variable y.

A solution of the self-similar form is

    rho(t, x) = (T - t)**(-1/gamma)           * Theta(y)
    u(t, x)   = (T - t)**(-(gamma-1)/(2gamma)) * V(y),     y = x / (T - t)**((gamma+1)/(2gamma))

Profiles are radial: ``Theta(y) = theta(|y|)`` and ``V(y) = v(|y|) y / |y|``.
They are stored as callables of the radius so closed forms and sampled
profiles share the residual operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.special import gamma as gamma_fn

from .errors import (
    DegenerateGamma,
    EvaluationPastBlowup,
    NonIntegrable,
    NotLinearVelocity,
    OriginSingularity,
)
from .exact_solution import ORIGIN_EXCLUSION, blowup_constant, similarity_slope
from .params import FluidParams

RadialFn = Callable[[np.ndarray], np.ndarray]


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return 2.0 * np.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def _zero(r):
    return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class Profile:
    """Radial profile pair with first derivatives (and v'' for the viscous terms)."""

    theta: RadialFn
    dtheta: RadialFn
    v: RadialFn
    dv: RadialFn
    d2v: RadialFn = _zero
    beta: float | None = None

    @classmethod
    def zero(cls) -> "Profile":
        return cls(_zero, _zero, _zero, _zero, _zero, beta=0.0)

    @classmethod
    def power_law(cls, coeff, exponent, beta, offset=0.0) -> "Profile":
        """``theta = coeff r**exponent + offset`` with linear velocity ``beta y``."""
        return cls(
            theta=lambda r: coeff * np.asarray(r, dtype=float) ** exponent + offset,
            dtheta=lambda r: coeff * exponent * np.asarray(r, dtype=float) ** (exponent - 1.0),
            v=lambda r: beta * np.asarray(r, dtype=float),
            dv=lambda r: np.full_like(np.asarray(r, dtype=float), beta),
            beta=beta,
        )

    @classmethod
    def from_samples(cls, r, theta, v, beta=None) -> "Profile":
        """Cubic-spline profile through radial samples."""
        th = CubicSpline(r, theta)
        vs = CubicSpline(r, v)
        return cls(th, th.derivative(), vs, vs.derivative(), vs.derivative(2), beta=beta)

    def __add__(self, other: "Profile") -> "Profile":
        beta = self.beta if self.beta == other.beta else None
        return Profile(
            theta=lambda r: self.theta(r) + other.theta(r),
            dtheta=lambda r: self.dtheta(r) + other.dtheta(r),
            v=lambda r: self.v(r) + other.v(r),
            dv=lambda r: self.dv(r) + other.dv(r),
            d2v=lambda r: self.d2v(r) + other.d2v(r),
            beta=beta,
        )


def beta_of(params: FluidParams) -> float:
    if params.gamma <= 1.0:
        raise DegenerateGamma("beta needs gamma > 1")
    return similarity_slope(params)


def explicit_profile(params: FluidParams) -> Profile:
    """``Theta = C_n**(1/(gamma-1)) |y|**(2/(gamma-1))``, ``V = beta y``."""
    g = params.gamma
    if g <= 1.0:
        raise DegenerateGamma("the explicit profile requires gamma > 1")
    coeff = blowup_constant(params) ** (1.0 / (g - 1.0))
    return Profile.power_law(coeff, 2.0 / (g - 1.0), beta_of(params))


def _radius(y, exclusion):
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(y, axis=-1)
    if np.any(r < exclusion):
        raise OriginSingularity("profile residuals are evaluated off the origin only")
    return y, r


class ProfileResidual(NamedTuple):
    r_mass: np.ndarray
    r_momentum: np.ndarray


def profile_residual(prof: Profile, params: FluidParams, y, exclusion=ORIGIN_EXCLUSION) -> ProfileResidual:
    """Residuals of the full profile system, viscous terms included."""
    g, n, A = params.gamma, params.n, params.A
    y, r = _radius(y, exclusion)
    th, dth = prof.theta(r), prof.dtheta(r)
    v, dv, d2v = prof.v(r), prof.dv(r), prof.d2v(r)

    div_v = dv + (n - 1) * v / r
    r_mass = th / g + (g + 1) / (2 * g) * r * dth + dth * v + th * div_v

    inertia = ((g - 1) / (2 * g) * v + (g + 1) / (2 * g) * r * dv + v * dv) * th
    grad_p = A * g * th ** (g - 1) * dth
    # curl-free radial field: mu Lap V + (lam + mu) grad div V = (lam + 2 mu) grad div V
    viscous = params.nu * (d2v + (n - 1) * (dv / r - v / r**2))
    r_mom = (inertia + grad_p - viscous)[..., None] * y / r[..., None]
    return ProfileResidual(r_mass, r_mom)


def reduced_residual(prof: Profile, params: FluidParams, y, exclusion=ORIGIN_EXCLUSION) -> ProfileResidual:
    """Residuals of the over-determined system obtained for ``V = beta y``."""
    if prof.beta is None:
        raise NotLinearVelocity("reduced system needs a linear velocity profile (beta set)")
    g, n, A, beta = params.gamma, params.n, params.A, prof.beta
    y, r = _radius(y, exclusion)
    th, dth = prof.theta(r), prof.dtheta(r)
    r1 = (1 / g + n * beta) * th + ((g + 1) / (2 * g) + beta) * r * dth
    r2 = (A * g * th ** (g - 1) * dth / r + (1 + beta) * beta * th)[..., None] * y
    return ProfileResidual(r1, r2)


def reconstruct(prof: Profile, params: FluidParams, T, t, x):
    """Density and velocity of the self-similar solution built from ``prof``."""
    g = params.gamma
    t = np.asarray(t, dtype=float)
    if np.any(t >= T):
        raise EvaluationPastBlowup(f"t = {np.max(t)} is not before T = {T}")
    tau = np.asarray(T - t)
    x = np.asarray(x, dtype=float)
    y = x / tau[..., None] ** ((g + 1) / (2 * g))
    r = np.linalg.norm(y, axis=-1)
    rho = tau ** (-1.0 / g) * prof.theta(r)
    if prof.beta is not None:
        vel = prof.beta * y
    else:
        safe = np.where(r > 0, r, 1.0)
        vel = np.where(r[..., None] > 0, (prof.v(r) / safe)[..., None] * y, 0.0)
    u = tau[..., None] ** (-(g - 1) / (2 * g)) * vel
    return rho, u


class Obstruction(NamedTuple):
    lhs: float
    rhs: float
    violated: bool


def lp_norm_power(prof: Profile, n: int, p: float, R: float, rtol=1e-10, max_level=20) -> float:
    """``||Theta||_{L^p(|y| <= R)}**p`` by composite Simpson with step halving."""
    area = sphere_area(n)

    def quad(m):
        r = np.linspace(0.0, R, m + 1)
        f = np.abs(prof.theta(r)) ** p * r ** (n - 1)
        return area * simpson(f, x=r)

    m = 64
    prev = quad(m)
    for _ in range(max_level):
        m *= 2
        cur = quad(m)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return cur


def lp_obstruction(prof: Profile, params: FluidParams, p: float, R: float,
                   check_integrability=False, tail_tol=1e-2, samples=4001) -> Obstruction:
    """Both sides of the L^p a priori inequality on ``|y| <= R``.

    ``lhs = |(2p - 3(gamma+1)) / (2 p gamma)| ||Theta||_p^p`` and
    ``rhs = (p-1)/p ||Theta||_p^p ||div V||_inf``. With ``check_integrability``
    the norm over ``|y| <= 2R`` is compared with the one over ``|y| <= R`` and
    :class:`NonIntegrable` is raised when the outer shell holds more than
    ``tail_tol`` of the total.
    """
    if not p > 1:
        raise ValueError("exponent must exceed 1")
    g, n = params.gamma, params.n
    norm_p = lp_norm_power(prof, n, p, R)
    if check_integrability:
        outer = lp_norm_power(prof, n, p, 2 * R)
        if not np.isfinite(outer) or (outer > 0 and (outer - norm_p) / outer > tail_tol):
            raise NonIntegrable(f"||Theta||_{p}^{p} grows from {norm_p:g} to {outer:g} when R doubles")
    if not np.isfinite(norm_p):
        raise NonIntegrable("Theta is not p-integrable near the origin")

    if prof.beta is not None:
        div_max = abs(n * prof.beta)
    else:
        r = np.linspace(R / samples, R, samples)
        div_max = float(np.max(np.abs(prof.dv(r) + (n - 1) * prof.v(r) / r)))
    lhs = abs((2 * p - 3 * (g + 1)) / (2 * p * g)) * norm_p
    rhs = (p - 1) / p * norm_p * div_max
    return Obstruction(float(lhs), float(rhs), bool(lhs > rhs))

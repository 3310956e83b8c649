"""Model constants and the derived threshold constants of the type-I theory."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConstraintViolation, NoFeasibleP

TOL = 1e-12


@dataclass(frozen=True)
class FluidParams:
    """Constants of the barotropic system with pressure ``A * rho**gamma``.

    ``lam`` is the second viscosity coefficient (``lambda`` is reserved).
    Construction validates the physical constraint.
    """

    gamma: float = 2.0
    A: float = 1.0
    mu: float = 1.0
    lam: float = 0.0
    n: int = 3

    def __post_init__(self):
        validate(self)

    @property
    def nu(self) -> float:
        """Longitudinal viscosity ``lam + 2 mu`` of radial curl-free flow."""
        return self.lam + 2.0 * self.mu


@dataclass(frozen=True)
class CriteriaConstants:
    p: float
    kappa_max: float
    delta: float


def validate(params: FluidParams) -> None:
    if params.n not in (2, 3):
        raise ConstraintViolation(f"n must be 2 or 3, got {params.n}")
    if not params.gamma >= 1.0:
        raise ConstraintViolation(f"gamma >= 1 violated: gamma = {params.gamma}")
    if not params.A > 0.0:
        raise ConstraintViolation(f"A > 0 violated: A = {params.A}")
    if not params.mu > 0.0:
        raise ConstraintViolation(f"mu > 0 violated: mu = {params.mu}")
    if not params.n * params.lam + 2.0 * params.mu > 0.0:
        raise ConstraintViolation(
            f"n*lambda + 2*mu > 0 violated: "
            f"{params.n}*{params.lam} + 2*{params.mu} = {params.n * params.lam + 2 * params.mu}"
        )


def quadratic_f(R, lam, mu):
    """The quadratic ``4 mu - (lam + mu) R^2 + 4 mu R`` whose positivity at p - 2 selects p."""
    return 4.0 * mu - (lam + mu) * R**2 + 4.0 * mu * R


def positive_root(lam, mu) -> float:
    """Positive root of :func:`quadratic_f` (requires ``lam + mu > 0``)."""
    s = lam + mu
    return (2.0 * mu + 2.0 * math.sqrt(mu * mu + mu * s)) / s


def select_p(lam: float, mu: float) -> float:
    """Integrability exponent p in (3, 6) with ``quadratic_f(p - 2) > 0``.

    Returns 4 whenever ``lam < 2 mu``; otherwise the midpoint of the feasible
    interval ``(3, 2 + min(R+, 4))``.
    """
    if not mu > 0:
        raise ConstraintViolation(f"mu > 0 violated: mu = {mu}")
    if lam >= 7.0 * mu:
        raise NoFeasibleP(f"lambda = {lam} >= 7 mu = {7 * mu}: f(1) = {7 * mu - lam} <= 0")
    if lam < 2.0 * mu:
        return 4.0
    upper = 2.0 + min(positive_root(lam, mu), 4.0)
    return 0.5 * (3.0 + upper)


def kappa_bound(gamma: float, p: float) -> float:
    """Upper bound for the admissible type-I rate; callers compare strictly."""
    return min(1.0 / (gamma + 3.0), 1.0 / (3.0 * gamma), (p - 3.0) / (p + 1.0))


def delta_of(gamma: float) -> float:
    if gamma <= 1.5:
        return (gamma + 2.0) / (gamma + 4.0)
    return (3.0 * gamma - 1.0) / (3.0 * gamma + 1.0)


def criteria_constants(params: FluidParams) -> CriteriaConstants:
    p = select_p(params.lam, params.mu)
    return CriteriaConstants(p=p, kappa_max=kappa_bound(params.gamma, p), delta=delta_of(params.gamma))


_DIMENSIONS = {
    "x": lambda g: 1.0,
    "t": lambda g: 2.0 * g / (g + 1.0),
    "rho": lambda g: -2.0 / (g + 1.0),
    "u": lambda g: -(g - 1.0) / (g + 1.0),
}


def scaling_dimension(quantity: str, gamma: float) -> float:
    """Scaling dimension of ``x``, ``t``, ``rho`` or ``u`` (space has dimension 1)."""
    try:
        return _DIMENSIONS[quantity](gamma)
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}; expected one of {sorted(_DIMENSIONS)}") from None

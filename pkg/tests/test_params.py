import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cnslab.errors import ConstraintViolation, NoFeasibleP
from cnslab.params import (
    FluidParams, criteria_constants, delta_of, kappa_bound, quadratic_f, scaling_dimension, select_p,
)


def test_validate_accepts_admissible():
    FluidParams(gamma=2, A=1, mu=1, lam=1, n=3)


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(gamma=2, A=1, mu=1, lam=-1, n=3), "n*lambda + 2*mu"),
        (dict(gamma=2, A=1, mu=0, lam=1, n=3), "mu > 0"),
        (dict(gamma=0.5, A=1, mu=1, lam=0, n=3), "gamma >= 1"),
        (dict(gamma=2, A=0, mu=1, lam=0, n=3), "A > 0"),
        (dict(gamma=2, A=1, mu=1, lam=0, n=4), "n must be"),
    ],
)
def test_validate_rejects(kwargs, fragment):
    with pytest.raises(ConstraintViolation, match=fragment.replace("*", r"\*").replace("+", r"\+")):
        FluidParams(**kwargs)


def test_two_dimensional_constraint_is_weaker():
    # 2*(-0.9) + 2 > 0 but 3*(-0.9) + 2 < 0
    FluidParams(lam=-0.9, mu=1, n=2)
    with pytest.raises(ConstraintViolation):
        FluidParams(lam=-0.9, mu=1, n=3)


def test_select_p_default_branch():
    assert select_p(1.0, 1.0) == 4.0
    assert quadratic_f(2.0, 1.0, 1.0) == 4.0


def test_select_p_midpoint_branch():
    # positive root of -7.5 R^2 + 4 R + 4 from numpy's companion-matrix solver
    roots = np.roots([-7.5, 4.0, 4.0])
    r_plus = roots[roots > 0][0]
    assert r_plus == pytest.approx(1.0441269193127067, abs=1e-14)
    assert select_p(6.5, 1.0) == pytest.approx(3.0220634596563534, abs=1e-12)


def test_select_p_infeasible():
    with pytest.raises(NoFeasibleP):
        select_p(7.0, 1.0)


@given(mu=st.floats(0.01, 100), frac=st.floats(-0.66, 6.999))
def test_selected_p_makes_quadratic_positive(mu, frac):
    lam = frac * mu
    p = select_p(lam, mu)
    assert 3 < p < 6
    assert quadratic_f(p - 2, lam, mu) > 0


@pytest.mark.parametrize(
    "gamma, expected",
    [(2, Fraction(1, 6)), (1, Fraction(1, 5)), (3, Fraction(1, 9))],
)
def test_kappa_bound_examples(gamma, expected):
    g = Fraction(gamma)
    oracle = min(1 / (g + 3), 1 / (3 * g), Fraction(4 - 3, 4 + 1))
    assert oracle == expected
    assert kappa_bound(gamma, 4.0) == pytest.approx(float(expected), abs=1e-12)


@given(p=st.floats(3.01, 5.99))
def test_kappa_bound_monotone_in_gamma(p):
    gammas = np.linspace(1, 5, 41)
    vals = np.array([kappa_bound(g, p) for g in gammas])
    assert np.all(np.diff(vals) <= 1e-15)
    assert np.all(vals < np.maximum.reduce([1 / (gammas + 3), 1 / (3 * gammas), np.full_like(gammas, (p - 3) / (p + 1))]) + 1e-15)


@pytest.mark.parametrize("gamma, expected", [(1.0, 3 / 5), (1.5, 7 / 11), (2.0, 5 / 7)])
def test_delta_of(gamma, expected):
    assert delta_of(gamma) == pytest.approx(expected, abs=1e-15)


def test_delta_branches_agree_at_three_halves():
    g = 1.5
    assert abs((g + 2) / (g + 4) - (3 * g - 1) / (3 * g + 1)) <= 1e-15


@pytest.mark.parametrize(
    "q, gamma, expected", [("t", 3, 1.5), ("u", 1, 0.0), ("rho", 3, -0.5), ("x", 2, 1.0)]
)
def test_scaling_dimension(q, gamma, expected):
    assert scaling_dimension(q, gamma) == pytest.approx(expected, abs=1e-15)


def test_scaling_dimension_unknown():
    with pytest.raises(ValueError):
        scaling_dimension("p", 2)


@pytest.mark.parametrize("gamma", np.linspace(1, 4, 13))
def test_continuity_equation_is_dimensionally_homogeneous(gamma):
    d = lambda q: scaling_dimension(q, gamma)  # noqa: E731
    assert d("rho") - d("t") == pytest.approx(d("rho") + d("u") - d("x"), abs=1e-14)
    # momentum: rho u_t against grad of the pressure rho^gamma
    assert d("rho") + d("u") - d("t") == pytest.approx(gamma * d("rho") - d("x"), abs=1e-14)


def test_criteria_constants_bundle():
    c = criteria_constants(FluidParams(gamma=2, mu=1, lam=1))
    assert (c.p, c.kappa_max, c.delta) == (4.0, pytest.approx(1 / 6), pytest.approx(5 / 7))
    assert math.isclose(c.kappa_max, 1 / 6)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cnslab.errors import BlowupDetected, ConfigError
from cnslab.exact_solution import ExactBlowup
from cnslab.grid import BoundaryCondition, RadialGrid, State, sample_exact
from cnslab.params import FluidParams
from cnslab.scenarios import gaussian_bump, rest
from cnslab.solver import RadialSolver, SolverConfig, simulate

P = FluidParams(gamma=2.0, A=1.0, mu=1e-3, lam=0.0, n=3)


def _exact_setup(cells, mu=1e-4, r_min=0.2, T=1.0):
    params = FluidParams(gamma=2.0, A=1.0, mu=mu, lam=0.0, n=3)
    sol = ExactBlowup(T, params)
    grid = RadialGrid(r_min, 1.0, cells)
    return params, sol, grid, BoundaryCondition("exact", "exact", sol)


@pytest.mark.parametrize("kwargs", [dict(cfl=0.0), dict(cfl=1.5), dict(reconstruction="weno"),
                                    dict(limiter="superbee"), dict(floor=-1.0)])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SolverConfig(**kwargs)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("reconstruction", ["linear", "constant"])
def test_rest_state_is_steady(n, reconstruction):
    params = FluidParams(gamma=1.4, mu=0.1, lam=0.0, n=n)
    grid = RadialGrid(0.0, 1.0, 40)
    solver = RadialSolver(grid, params, BoundaryCondition(), SolverConfig(reconstruction=reconstruction))
    s = rest(grid, 2.0)
    drho, du = solver.rhs(s)
    assert np.max(np.abs(drho)) <= 1e-13 and np.max(np.abs(du)) <= 1e-13
    out = solver.step(s)
    assert out.t > 0
    np.testing.assert_allclose(out.rho, s.rho, atol=1e-13)
    np.testing.assert_allclose(out.u, 0.0, atol=1e-13)


def test_rest_trajectory():
    grid = RadialGrid(0.0, 1.0, 30)
    traj = simulate(rest(grid), grid, P, t_end=0.05)
    for s in traj.snapshots:
        np.testing.assert_allclose(s.rho, 1.0, atol=1e-13)


@pytest.mark.parametrize("reconstruction", ["linear", "constant"])
def test_rhs_truncation_error_converges(reconstruction):
    errs = []
    for m in (50, 100, 200):
        params, sol, grid, bc = _exact_setup(m)
        solver = RadialSolver(grid, params, bc, SolverConfig(reconstruction=reconstruction))
        t = 0.3
        drho, du = solver.rhs(sample_exact(grid, sol, t))
        r = grid.centers
        e = max(np.max(np.abs(drho - sol.rho_t_radial(t, r))), np.max(np.abs(du - sol.u_t_radial(t, r))))
        errs.append(e)
    assert errs[0] / errs[1] >= 1.8 and errs[1] / errs[2] >= 1.8, errs


def test_vacuum_cell_has_no_mass_flux():
    grid = RadialGrid(0.0, 1.0, 20)
    rho = np.ones(20)
    rho[8:12] = 1e-10
    u = np.zeros(20)
    solver = RadialSolver(grid, P, BoundaryCondition(), SolverConfig())
    drho, _ = solver.conservative_rhs(rho, u, 0.0)
    assert np.all(drho[9:11] == 0.0)


def test_manufactured_convergence():
    errs = []
    for m in (50, 100, 200):
        params, sol, grid, bc = _exact_setup(m)
        traj = simulate(sample_exact(grid, sol, 0.0), grid, params, bc, 0.5, record_every_step=False)
        final = traj.snapshots[-1]
        errs.append(np.sum(np.abs(final.rho - sol.rho_radial(0.5, grid.centers)) * grid.volumes(3)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.8), (errs, orders)


def test_exact_forced_run_fails_before_blowup():
    params, sol, grid, bc = _exact_setup(40, mu=1e-3, T=0.2)
    cfg = SolverConfig(dt_min=1e-7)
    with pytest.raises(BlowupDetected) as info:
        simulate(sample_exact(grid, sol, 0.0), grid, params, bc, 0.2 - 1e-12, config=cfg,
                 record_every_step=False)
    assert info.value.last_state.t < 0.2
    assert info.value.trajectory is not None


def test_t_end_after_blowup_is_rejected():
    params, sol, grid, bc = _exact_setup(20)
    with pytest.raises(Exception):
        simulate(sample_exact(grid, sol, 0.0), grid, params, bc, 1.5)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("limiter", ["minmod", "vanleer", "mc"])
def test_mass_conservation_with_walls(n, limiter):
    params = FluidParams(gamma=2.0, mu=1e-3, n=n)
    grid = RadialGrid(0.0, 1.0, 100)
    traj = simulate(gaussian_bump(grid), grid, params, t_end=0.3, config=SolverConfig(limiter=limiter))
    m = traj.series.values("mass")
    audited = m - traj.series.values("floored_mass_acc")
    assert np.max(np.abs(audited - audited[0])) / audited[0] <= 1e-12


@settings(max_examples=10, deadline=None)
@given(amp=st.floats(0.1, 5.0), width=st.floats(0.05, 0.4), bg=st.floats(0.01, 1.0))
def test_density_stays_positive(amp, width, bg):
    grid = RadialGrid(0.0, 1.0, 60)
    traj = simulate(gaussian_bump(grid, bg, amp, width), grid, P, t_end=0.05, record_every_step=False)
    assert all(np.all(s.rho > 0) for s in traj.snapshots)


def test_snapshots_land_on_requested_times():
    grid = RadialGrid(0.0, 1.0, 50)
    traj = simulate(gaussian_bump(grid), grid, P, t_end=0.2, snapshot_times=[0.05, 0.1331],
                    record_every_step=False)
    assert [s.t for s in traj.snapshots] == [0.0, 0.05, 0.1331, 0.2]
    assert np.all(np.diff(traj.series.times("mass")) > 0)


def test_step_budget():
    grid = RadialGrid(0.0, 1.0, 50)
    with pytest.raises(Exception, match="budget"):
        simulate(gaussian_bump(grid), grid, P, t_end=0.2, config=SolverConfig(max_steps=3))


def test_deterministic():
    grid = RadialGrid(0.0, 1.0, 50)
    a = simulate(gaussian_bump(grid), grid, P, t_end=0.1).snapshots[-1]
    b = simulate(gaussian_bump(grid), grid, P, t_end=0.1).snapshots[-1]
    assert np.array_equal(a.rho, b.rho) and np.array_equal(a.u, b.u)


def test_floor_is_audited():
    grid = RadialGrid(0.0, 1.0, 60)
    rho = np.full(60, 1e-6)
    rho[:10] = 1.0
    init = State(rho, np.zeros(60), 0.0)
    traj = simulate(init, grid, P, t_end=0.005, config=SolverConfig(floor=1e-4))
    assert traj.floored_mass > 0
    m = traj.series.values("mass") - traj.series.values("floored_mass_acc")
    assert abs(m[-1] - m[0]) / m[0] <= 1e-12

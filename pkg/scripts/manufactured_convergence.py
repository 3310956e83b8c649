"""L1 convergence of the radial solver against the explicit blowup solution.

    python3 scripts/manufactured_convergence.py --levels 50 100 200 400
"""

import argparse
import time

import numpy as np

from cnslab import BoundaryCondition, ExactBlowup, FluidParams, RadialGrid, SolverConfig, simulate
from cnslab.grid import sample_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--gamma", type=float, default=2.0)
    ap.add_argument("--mu", type=float, default=1e-4)
    ap.add_argument("--r-min", type=float, default=0.2)
    ap.add_argument("--t-end", type=float, default=0.5)
    ap.add_argument("--limiter", default="vanleer")
    ap.add_argument("--reconstruction", default="linear")
    args = ap.parse_args()

    params = FluidParams(gamma=args.gamma, mu=args.mu, n=3)
    sol = ExactBlowup(1.0, params)
    bc = BoundaryCondition("exact", "exact", sol)
    config = SolverConfig(limiter=args.limiter, reconstruction=args.reconstruction)
    prev = None
    print(f"{'cells':>6} {'L1(rho)':>12} {'L1(u)':>12} {'order':>7} {'steps':>7} {'time[s]':>8}")
    for cells in args.levels:
        grid = RadialGrid(args.r_min, 1.0, cells)
        start = time.perf_counter()
        traj = simulate(sample_exact(grid, sol, 0.0), grid, params, bc, args.t_end, config=config,
                        record_every_step=False)
        final = traj.snapshots[-1]
        V = grid.volumes(3)
        e_rho = np.sum(np.abs(final.rho - sol.rho_radial(args.t_end, grid.centers)) * V)
        e_u = np.sum(np.abs(final.u - sol.u_radial(args.t_end, grid.centers)) * V)
        order = "" if prev is None else f"{np.log2(prev / e_rho):.3f}"
        print(f"{cells:6d} {e_rho:12.4e} {e_u:12.4e} {order:>7} {traj.steps:7d} {time.perf_counter() - start:8.2f}")
        prev = e_rho


if __name__ == "__main__":
    main()

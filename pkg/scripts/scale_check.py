"""Rescaled re-simulation of a Gaussian density bump at several resolutions.

    python3 scripts/scale_check.py --kappa 2 --levels 200 400 800
"""

import argparse

import numpy as np

from cnslab import FluidParams, RadialGrid, ScalingTransform
from cnslab.scaling import invariance_check_numeric
from cnslab.scenarios import gaussian_bump


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", type=float, default=2.0)
    ap.add_argument("--gamma", type=float, default=2.0)
    ap.add_argument("--mu", type=float, default=1e-3)
    ap.add_argument("--levels", type=int, nargs="+", default=[200, 400, 800])
    ap.add_argument("--t1", type=float, default=0.1)
    ap.add_argument("--t2", type=float, default=0.3)
    args = ap.parse_args()

    params = FluidParams(gamma=args.gamma, mu=args.mu, n=3)
    s = ScalingTransform(args.kappa, args.gamma)
    rows = []
    for cells in args.levels:
        grid = RadialGrid(0.0, 1.0, cells)
        rows.append(invariance_check_numeric(s, params, grid, gaussian_bump(grid), args.t1, args.t2))
    print(f"{'cells':>6} {'target':>7} {'L1(rho)':>12} {'L1(u)':>12} {'ratio':>7}")
    for k, rep in enumerate(rows):
        ratio = "" if k == 0 else f"{rows[k - 1].l1_rho / rep.l1_rho:.2f}"
        print(f"{rep.cells:6d} {rep.target_cells:7d} {rep.l1_rho:12.4e} {rep.l1_u:12.4e} {ratio:>7}")
    if len(rows) > 1:
        orders = np.log2([a.l1_rho / b.l1_rho for a, b in zip(rows, rows[1:])])
        print("observed orders:", np.round(orders, 3).tolist())


if __name__ == "__main__":
    main()

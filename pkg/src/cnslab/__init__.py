"""Numerical laboratory for the barotropic compressible Navier-Stokes equations.

Scaling symmetry, type-I blowup thresholds, the explicit self-similar blowup
solution and a radial finite-volume solver to cross-check them.
"""

__version__ = "0.1.0"

from .errors import CNSLabError  # noqa: E402
from .exact_solution import ExactBlowup, blowup_constant  # noqa: E402
from .grid import BoundaryCondition, RadialGrid, State  # noqa: E402
from .params import FluidParams, delta_of, kappa_bound, scaling_dimension, select_p  # noqa: E402
from .scaling import ScalingTransform  # noqa: E402
from .solver import RadialSolver, SolverConfig, simulate  # noqa: E402

__all__ = [
    "BoundaryCondition", "CNSLabError", "ExactBlowup", "FluidParams", "RadialGrid", "RadialSolver",
    "ScalingTransform", "SolverConfig", "State", "blowup_constant", "delta_of", "kappa_bound",
    "scaling_dimension", "select_p", "simulate",
]

"""Integral-equation laboratory for ``u_tt - u_xx = |u_t|^p / (1+x^2)^((1+a)/2)``
in one space dimension: Duhamel operators on a characteristic grid, Picard and
marching solvers, a leapfrog oracle, a-priori bound checks, the comparison
ODE and lifespan sweeps.
"""

from .model import BumpData, CharGrid, DataNorms, Field, PiecewisePolynomial, ProblemSpec, build_grid, data_norms, default_bump
from .picard import NotConverged, PicardDiagnostics, march_solve, pde_residual, picard_iterate, picard_solve, reconstruct_w

__version__ = "0.1.0"

__all__ = [
    "BumpData", "CharGrid", "DataNorms", "Field", "PiecewisePolynomial", "ProblemSpec",
    "build_grid", "data_norms", "default_bump",
    "NotConverged", "PicardDiagnostics", "march_solve", "pde_residual", "picard_iterate",
    "picard_solve", "reconstruct_w",
]

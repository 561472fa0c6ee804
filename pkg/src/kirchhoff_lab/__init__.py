"""
Kirchhoff Lab

Sub-supersolution verification and solvers for nonlocal Kirchhoff problems

    -M(|u|^2) Delta u = f(x, u) in (a, b),  u = 0 at both ends,

on uniform one-dimensional grids, plus numerical witnesses against the
classical comparison principle for non-constant M.
"""

from kirchhoff_lab.errors import KirchhoffError
from kirchhoff_lab.grid import GridFunction, Interval
from kirchhoff_lab.kirchhoff import KirchhoffM
from kirchhoff_lab.nonlinearity import Nonlinearity
from kirchhoff_lab.solver import SolveConfig, solve_in_interval
from kirchhoff_lab.subsuper import OrderInterval, verify_pair

__version__ = "0.1.0"

__all__ = [
    "KirchhoffError",
    "GridFunction",
    "Interval",
    "KirchhoffM",
    "Nonlinearity",
    "OrderInterval",
    "SolveConfig",
    "solve_in_interval",
    "verify_pair",
    "__version__",
]

"""Dual finite-volume / point-value solver for the 1-D shallow-water
equations with bathymetry and Manning friction."""

from .boundary import BoundaryPair, BoundarySpec
from .equilibrium import assemble_equilibrium, compute_Q, desingularize
from .grid import Bathymetry, DualState, Grid, SchemeConfig
from .integrator import SolverError, advance, ssp_rk3_step
from .scenarios import Scenario, build, exact_dambreak

__all__ = [
    "Bathymetry", "BoundaryPair", "BoundarySpec", "DualState", "Grid",
    "Scenario", "SchemeConfig", "SolverError", "advance",
    "assemble_equilibrium", "build", "compute_Q", "desingularize",
    "exact_dambreak", "ssp_rk3_step",
]

__version__ = "1.0.0"

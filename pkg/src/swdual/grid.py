"""Uniform 1-D mesh, dual average/point solution storage, and scheme configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [x_left, x_right] with n_cells cells.

    Nodes x_j (j = 0..n_cells) carry point values, cell centers x_{j+1/2}
    carry reconstructed values, cells [x_j, x_{j+1}] carry averages.
    """

    x_left: float
    x_right: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValueError("need at least 4 cells (stencils use two neighbors per side)")
        if not self.x_right > self.x_left:
            raise ValueError("empty domain")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def length(self) -> float:
        return self.x_right - self.x_left

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_left, self.x_right, self.n_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        x = self.nodes
        return 0.5 * (x[:-1] + x[1:])


@dataclass(frozen=True)
class Bathymetry:
    """Bottom elevation sampled at nodes and cell centers."""

    z_nodes: np.ndarray
    z_centers: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.z_nodes)) and np.all(np.isfinite(self.z_centers))):
            raise ValueError("bathymetry samples must be finite")
        if len(self.z_nodes) != len(self.z_centers) + 1:
            raise ValueError("inconsistent bathymetry sample lengths")

    @classmethod
    def from_callable(cls, grid: Grid, z) -> "Bathymetry":
        zn = np.asarray([float(z(x)) for x in grid.nodes])
        zc = np.asarray([float(z(x)) for x in grid.centers])
        return cls(zn, zc)

    @classmethod
    def flat(cls, grid: Grid) -> "Bathymetry":
        return cls(np.zeros(grid.n_nodes), np.zeros(grid.n_cells))


@dataclass
class SchemeConfig:
    """Physical constants and numerical knobs.

    eps_desing doubles as the dry tolerance; switch_C/switch_m parametrize the
    diffusion cut-off of the parachute scheme.
    """

    g: float = 9.812
    manning_n: float = 0.0
    cfl: float = 0.4
    eps_desing: float = 1e-9
    entropy_fix_eps: float = 0.05
    switch_C: float = 6.0
    switch_m: int = 20
    mood_enabled: bool = True

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError("g must be positive")
        if not (0 < self.cfl < 1):
            raise ValueError("cfl must lie in (0, 1)")
        if self.eps_desing <= 0:
            raise ValueError("eps_desing must be positive")
        if self.switch_m % 2 != 0:
            raise ValueError("switch_m must be even")


@dataclass
class DualState:
    """Cell averages of (h, q) plus node point values of (h, u)."""

    avg_h: np.ndarray
    avg_q: np.ndarray
    pt_h: np.ndarray
    pt_u: np.ndarray

    def copy(self) -> "DualState":
        return DualState(self.avg_h.copy(), self.avg_q.copy(),
                         self.pt_h.copy(), self.pt_u.copy())

    def validate(self, grid: Grid) -> None:
        if len(self.avg_h) != grid.n_cells or len(self.avg_q) != grid.n_cells:
            raise ValueError("cell-average arrays do not match grid")
        if len(self.pt_h) != grid.n_nodes or len(self.pt_u) != grid.n_nodes:
            raise ValueError("point-value arrays do not match grid")
        for a in (self.avg_h, self.avg_q, self.pt_h, self.pt_u):
            if not np.all(np.isfinite(a)):
                raise ValueError("non-finite entry in state")
        if np.any(self.avg_h < 0) or np.any(self.pt_h < 0):
            raise ValueError("negative water depth in state")

    @classmethod
    def zeros(cls, grid: Grid) -> "DualState":
        return cls(np.zeros(grid.n_cells), np.zeros(grid.n_cells),
                   np.zeros(grid.n_nodes), np.zeros(grid.n_nodes))


def point_conserved(pt_h, pt_u):
    """Map point primitive values (h, u) to conserved values (h, q=h*u)."""
    h = np.asarray(pt_h, dtype=float)
    if np.any(h < 0):
        raise ValueError("negative depth passed to point_conserved")
    q = h * np.asarray(pt_u, dtype=float)
    if h.ndim == 0:
        return float(h), float(q)
    return h, q

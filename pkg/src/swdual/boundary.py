"""Boundary policies: ghost extension and Dirichlet pinning of point values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DualState, SchemeConfig

EXTRAPOLATION = "extrapolation"
PERIODIC = "periodic"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class BoundarySpec:
    """One side of the domain.

    For Dirichlet sides, `h` is always pinned; `u` is pinned only when given.
    `subcritical_only` delays the pin until the local Froude number drops
    below one (downstream depth condition of the transcritical runs).
    """

    kind: str = EXTRAPOLATION
    h: float | None = None
    u: float | None = None
    subcritical_only: bool = False

    def __post_init__(self):
        if self.kind not in (EXTRAPOLATION, PERIODIC, DIRICHLET):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == DIRICHLET and self.h is None:
            raise ValueError("dirichlet boundary needs at least a depth value")


@dataclass(frozen=True)
class BoundaryPair:
    left: BoundarySpec = BoundarySpec()
    right: BoundarySpec = BoundarySpec()

    def __post_init__(self):
        if (self.left.kind == PERIODIC) != (self.right.kind == PERIODIC):
            raise ValueError("periodic boundaries must be used on both sides")

    @property
    def periodic(self) -> bool:
        return self.left.kind == PERIODIC


def _active(spec: BoundarySpec, h: float, u: float, g: float) -> bool:
    """Whether a Dirichlet pin applies right now (Froude gate for subcritical-only)."""
    if spec.kind != DIRICHLET:
        return False
    if not spec.subcritical_only:
        return True
    c = np.sqrt(g * max(h, 0.0))
    return abs(u) < c


def apply_point_bc(state: DualState, bcs: BoundaryPair, config: SchemeConfig) -> None:
    """Re-impose boundary conditions on the point values, in place."""
    if bcs.periodic:
        state.pt_h[-1] = state.pt_h[0]
        state.pt_u[-1] = state.pt_u[0]
        return
    l, r = bcs.left, bcs.right
    if _active(l, state.pt_h[0], state.pt_u[0], config.g):
        state.pt_h[0] = l.h
        if l.u is not None:
            state.pt_u[0] = l.u
    if _active(r, state.pt_h[-1], state.pt_u[-1], config.g):
        state.pt_h[-1] = r.h
        if r.u is not None:
            state.pt_u[-1] = r.u


def pinned_components(state: DualState, bcs: BoundaryPair, config: SchemeConfig):
    """Masks over nodes for the (h, u) components whose residuals are zeroed."""
    n = len(state.pt_h)
    pin_h = np.zeros(n, dtype=bool)
    pin_u = np.zeros(n, dtype=bool)
    if bcs.periodic:
        return pin_h, pin_u
    if _active(bcs.left, state.pt_h[0], state.pt_u[0], config.g):
        pin_h[0] = True
        pin_u[0] = bcs.left.u is not None
    if _active(bcs.right, state.pt_h[-1], state.pt_u[-1], config.g):
        pin_h[-1] = True
        pin_u[-1] = bcs.right.u is not None
    return pin_h, pin_u


def pad_nodes(arr: np.ndarray, bcs: BoundaryPair) -> np.ndarray:
    """Node array (n+1,) -> (n+3,) with one ghost node per side."""
    if bcs.periodic:
        # nodes 0 and n are identified
        return np.concatenate(([arr[-2]], arr, [arr[1]]))
    return np.concatenate(([arr[0]], arr, [arr[-1]]))


def pad_centers_from_nodes(centers: np.ndarray, nodes: np.ndarray,
                           bcs: BoundaryPair) -> np.ndarray:
    """Center array (n,) -> (n+2,); non-periodic ghost centers copy the
    boundary node value (constant exterior extension, so one-sided stencils
    vanish on constant data)."""
    if bcs.periodic:
        return np.concatenate(([centers[-1]], centers, [centers[0]]))
    return np.concatenate(([nodes[0]], centers, [nodes[-1]]))


def pad_cells(arr: np.ndarray, bcs: BoundaryPair) -> np.ndarray:
    """Cell array (n,) -> (n+2,); ghost cells copy the nearest interior cell."""
    if bcs.periodic:
        return np.concatenate(([arr[-1]], arr, [arr[0]]))
    return np.concatenate(([arr[0]], arr, [arr[-1]]))

"""Finite-volume right-hand side: point-value fluxes and the well-balanced
Simpson quadrature of the momentum source."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryPair
from .equilibrium import EquilibriumField
from .grid import Bathymetry, DualState, Grid, SchemeConfig


@dataclass
class FvRhs:
    d_avg_h: np.ndarray
    d_avg_q: np.ndarray


def flux_at_node(h, u, config: SchemeConfig):
    """Physical flux (q, h u^2 + g h^2 / 2) from point primitive values."""
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(h < 0):
        raise ValueError("negative depth passed to flux_at_node")
    f1 = h * u
    f2 = h * u * u + 0.5 * config.g * h * h
    if f1.ndim == 0:
        return float(f1), float(f2)
    return f1, f2


def _flux_tolerant(h, u, config: SchemeConfig):
    """Like flux_at_node but maps negative depths to NaN instead of raising,
    so inadmissible intermediate stages surface through the NaN detection
    criterion rather than aborting the step."""
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    bad = h < 0
    hs = np.where(bad, np.nan, h)
    f1 = hs * u
    f2 = hs * u * u + 0.5 * config.g * hs * hs
    return f1, f2


def source_average(eq: EquilibriumField, state: DualState, grid: Grid,
                   config: SchemeConfig):
    """Cell averages of the momentum source, one value per cell.

    The flux-like bracket reuses the exact node flux values so that it cancels
    the flux divergence bitwise on steady data.
    """
    dx = grid.dx
    hn, un = state.pt_h, state.pt_u
    _, f2 = _flux_tolerant(hn, un, config)
    flux_like = (f2[1:] - f2[:-1]) / dx

    qn, En = eq.q_nodes, eq.E_nodes
    qc, Ec = eq.q_centers, eq.E_centers

    # difference form: exactly zero on constant data
    qx_l = (4.0 * (qc - qn[:-1]) - (qn[1:] - qn[:-1])) / dx
    qx_r = ((qn[:-1] - qn[1:]) - 4.0 * (qc - qn[1:])) / dx
    qx_c = (qn[1:] - qn[:-1]) / dx
    Ex_l = (4.0 * (Ec - En[:-1]) - (En[1:] - En[:-1])) / dx
    Ex_r = ((En[:-1] - En[1:]) - 4.0 * (Ec - En[1:])) / dx
    Ex_c = (En[1:] - En[:-1]) / dx

    adv = (un[:-1] * qx_l + un[1:] * qx_r + 4.0 * eq.u_centers * qx_c) / 6.0
    grav = (hn[:-1] * Ex_l + hn[1:] * Ex_r + 4.0 * eq.h_centers * Ex_c) / 6.0
    return flux_like - adv - grav


def parachute_source_average(eq: EquilibriumField, state: DualState,
                             grid: Grid, config: SchemeConfig):
    """Momentum-source average paired with the parachute flux.

    The quadrature version above weighs the brackets with reconstructed cell
    centers, which collapse (and blow up the velocity there) when the cell
    average drops far below its nodes; this variant uses midpoint node
    averages instead, so it stays bounded by the node data while its
    difference form still vanishes exactly on steady (constant q, E) data.
    """
    dx = grid.dx
    hn, un = state.pt_h, state.pt_u
    _, f2 = _flux_tolerant(hn, un, config)
    flux_like = (f2[1:] - f2[:-1]) / dx

    qn, En = eq.q_nodes, eq.E_nodes
    adv = 0.5 * (un[:-1] + un[1:]) * (qn[1:] - qn[:-1]) / dx
    grav = 0.5 * (hn[:-1] + hn[1:]) * (En[1:] - En[:-1]) / dx
    return flux_like - adv - grav


def fv_rhs(state: DualState, eq: EquilibriumField, grid: Grid,
           bathy: Bathymetry, config: SchemeConfig,
           bcs: BoundaryPair | None = None,
           troubled_nodes: np.ndarray | None = None) -> FvRhs:
    """Semi-discrete update of the cell averages.

    `troubled_nodes` marks nodes whose point-value flux is replaced by the
    first-order local Lax-Friedrichs parachute flux.
    """
    dx = grid.dx
    f1, f2 = _flux_tolerant(state.pt_h, state.pt_u, config)
    src = source_average(eq, state, grid, config)
    if troubled_nodes is not None and np.any(troubled_nodes):
        from .mood import parachute_fv_flux
        p1, p2 = parachute_fv_flux(state, eq, grid, config, bcs)
        f1 = np.where(troubled_nodes, p1, f1)
        f2 = np.where(troubled_nodes, p2, f2)
        # Cells touching a repaired node fall back to the bounded source form
        # when their reconstructed center depth has collapsed below the node
        # depths (the quadrature weights would blow up there); elsewhere the
        # quadrature source keeps its accuracy through the repair.
        repaired = troubled_nodes[:-1] | troubled_nodes[1:]
        hc = eq.h_centers
        hn = state.pt_h
        degenerate = ~(hc >= 0.2 * np.minimum(hn[:-1], hn[1:]))
        src = np.where(repaired & degenerate,
                       parachute_source_average(eq, state, grid, config), src)
    d_avg_h = -(f1[1:] - f1[:-1]) / dx
    d_avg_q = -(f2[1:] - f2[:-1]) / dx + src
    return FvRhs(d_avg_h=d_avg_h, d_avg_q=d_avg_q)

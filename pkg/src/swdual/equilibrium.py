"""Center/quarter reconstruction, the global friction integral, and the
equilibrium variables (q, E) at nodes and centers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Bathymetry, DualState, Grid, SchemeConfig


@dataclass
class EquilibriumField:
    """(q, E) sampled at nodes and centers plus the auxiliary reconstructions."""

    q_nodes: np.ndarray
    E_nodes: np.ndarray
    q_centers: np.ndarray
    E_centers: np.ndarray
    Q_nodes: np.ndarray
    Q_centers: np.ndarray
    h_centers: np.ndarray
    u_centers: np.ndarray
    h_quarter: np.ndarray
    q_quarter: np.ndarray


def desingularize(a, b, eps: float = 1e-9):
    """a/b where b >= eps, else 0. Total on all inputs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ok = b >= eps
    out = np.where(ok, a / np.where(ok, b, 1.0), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def interpolate_center(u_left, u_avg, u_right):
    """Parabolic interpolant of (point, average, point) data at the midpoint."""
    return 1.5 * np.asarray(u_avg) - 0.25 * (np.asarray(u_left) + np.asarray(u_right))


def interpolate_quarter(u_left, u_avg, u_right):
    """Same interpolant evaluated a quarter of the way into the cell."""
    return (0.1875 * np.asarray(u_left) + 1.125 * np.asarray(u_avg)
            - 0.3125 * np.asarray(u_right))


def _friction_slope(h, q, config: SchemeConfig):
    """|q| q / h^{10/3} with the dry cut-off; negative h treated as dry."""
    h = np.asarray(h, dtype=float)
    q = np.asarray(q, dtype=float)
    wet = h >= config.eps_desing
    hp = np.where(wet, h, 1.0)
    return np.where(wet, np.abs(q) * q / hp ** (10.0 / 3.0), 0.0)


def _reconstruct(state: DualState):
    """Center and quarter-point conserved values from averages and node points."""
    hl, hr = state.pt_h[:-1], state.pt_h[1:]
    ql = state.pt_h[:-1] * state.pt_u[:-1]
    qr = state.pt_h[1:] * state.pt_u[1:]
    h_c = interpolate_center(hl, state.avg_h, hr)
    q_c = interpolate_center(ql, state.avg_q, qr)
    h_q = interpolate_quarter(hl, state.avg_h, hr)
    q_q = interpolate_quarter(ql, state.avg_q, qr)
    return h_c, q_c, h_q, q_q


def compute_Q(state: DualState, grid: Grid, bathy: Bathymetry,
              config: SchemeConfig):
    """Friction integral by per-cell Simpson increments, anchored to zero at
    the left boundary node. Returns (Q_nodes, Q_centers)."""
    n = grid.n_cells
    if config.manning_n == 0.0:
        return np.zeros(n + 1), np.zeros(n)
    h_c, q_c, h_q, q_q = _reconstruct(state)
    q_nodes = state.pt_h * state.pt_u
    s_n = _friction_slope(state.pt_h, q_nodes, config)
    s_c = _friction_slope(h_c, q_c, config)
    s_q = _friction_slope(h_q, q_q, config)
    coeff = config.g * config.manning_n ** 2 * grid.dx
    cell_inc = (coeff / 6.0) * (s_n[:-1] + s_n[1:] + 4.0 * s_c)
    Q_nodes = np.concatenate(([0.0], np.cumsum(cell_inc)))
    Q_centers = Q_nodes[:-1] + (coeff / 12.0) * (s_n[:-1] + s_c + 4.0 * s_q)
    return Q_nodes, Q_centers


def assemble_equilibrium(state: DualState, grid: Grid, bathy: Bathymetry,
                         config: SchemeConfig) -> EquilibriumField:
    """Build the full (q, E) field for one right-hand-side evaluation."""
    g = config.g
    h_c, q_c, h_q, q_q = _reconstruct(state)
    Q_nodes, Q_centers = compute_Q(state, grid, bathy, config)
    q_nodes = state.pt_h * state.pt_u
    E_nodes = (0.5 * state.pt_u ** 2 + g * (state.pt_h + bathy.z_nodes)
               + Q_nodes)
    u_c = desingularize(q_c, h_c, config.eps_desing)
    E_centers = 0.5 * u_c ** 2 + g * (h_c + bathy.z_centers) + Q_centers
    return EquilibriumField(
        q_nodes=q_nodes, E_nodes=E_nodes,
        q_centers=q_c, E_centers=E_centers,
        Q_nodes=Q_nodes, Q_centers=Q_centers,
        h_centers=h_c, u_centers=u_c,
        h_quarter=h_q, q_quarter=q_q,
    )

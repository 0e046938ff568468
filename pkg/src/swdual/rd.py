"""Residual-distribution right-hand side for the point values: one-sided
stencils on (q, E) split through signed Jacobian projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryPair, pad_centers_from_nodes, pad_nodes
from .equilibrium import EquilibriumField
from .grid import DualState, Grid, SchemeConfig


@dataclass
class SplitJacobian:
    j_plus: np.ndarray
    j_minus: np.ndarray


def one_sided_deltas(eq: EquilibriumField, grid: Grid, bcs: BoundaryPair):
    """Backward/forward one-sided stencil values of (q, E) at every node.

    Returns (delta_plus, delta_minus), each of shape (2, n_nodes) with
    components ordered (q, E).
    """
    dx = grid.dx
    out_p = np.empty((2, grid.n_nodes))
    out_m = np.empty((2, grid.n_nodes))
    for k, (nod, cen) in enumerate(((eq.q_nodes, eq.q_centers),
                                    (eq.E_nodes, eq.E_centers))):
        ne = pad_nodes(nod, bcs)
        ce = pad_centers_from_nodes(cen, nod, bcs)
        # node j sits at ne[j+1]; center j-1/2 at ce[j], center j+1/2 at
        # ce[j+1]; difference form is exactly zero on constant data
        out_p[k] = ((ne[:-2] - ne[1:-1]) - 4.0 * (ce[:-1] - ne[1:-1])) / dx
        out_m[k] = (4.0 * (ce[1:] - ne[1:-1]) - (ne[2:] - ne[1:-1])) / dx
    return out_p, out_m


def _smoothed_abs(lam, eps_f):
    """Harten-type regularized |lambda|, never below eps_f/2."""
    a = np.abs(lam)
    small = a < eps_f
    safe = np.where(eps_f > 0, eps_f, 1.0)
    return np.where(small, (lam * lam + eps_f * eps_f) / (2.0 * safe), a)


def split_ratios(h, u, config: SchemeConfig):
    """Upwind weights r_k^+ = lambda_k^+/lambda_k (entropy-fixed), and their
    complements r_k^- = 1 - r_k^+, for both characteristic families."""
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    c = np.sqrt(config.g * np.maximum(h, 0.0))
    eps_f = config.entropy_fix_eps * (np.abs(u) + c)
    r_p = []
    for lam in (u - c, u + c):
        phi = _smoothed_abs(lam, eps_f)
        phi = np.where(phi > 0.0, phi, 1.0)
        r_p.append((lam + _smoothed_abs(lam, eps_f)) / (2.0 * phi))
    r1p, r2p = r_p
    # degenerate (dry) states: symmetric splitting
    dry = h < config.eps_desing
    r1p = np.where(dry, 0.5, r1p)
    r2p = np.where(dry, 0.5, r2p)
    return r1p, r2p, 1.0 - r1p, 1.0 - r2p


def split_jacobian(h: float, u: float, config: SchemeConfig) -> SplitJacobian:
    """Signed parts of the primitive-form Jacobian at one state."""
    if h < 0:
        raise ValueError("negative depth passed to split_jacobian")
    r1p, r2p, r1m, r2m = split_ratios(h, u, config)
    if h < config.eps_desing:
        half = 0.5 * np.eye(2)
        return SplitJacobian(j_plus=half.copy(), j_minus=half.copy())
    s = np.sqrt(h / config.g)

    def build(r1, r2):
        d = 0.5 * (r1 + r2)
        off = 0.5 * (r2 - r1)
        return np.array([[d, s * off], [off / s, d]])

    return SplitJacobian(j_plus=build(r1p, r2p), j_minus=build(r1m, r2m))


def rd_rhs(state: DualState, eq: EquilibriumField, grid: Grid,
           config: SchemeConfig, bcs: BoundaryPair,
           troubled_nodes: np.ndarray | None = None,
           bathy=None):
    """Semi-discrete update of the point values (d pt_h/dt, d pt_u/dt)."""
    d_p, d_m = one_sided_deltas(eq, grid, bcs)
    h, u = state.pt_h, state.pt_u
    r1p, r2p, r1m, r2m = split_ratios(h, u, config)
    wet = h >= config.eps_desing
    s = np.sqrt(np.where(wet, h, 1.0) / config.g)

    def apply(r1, r2, dq, dE):
        diag = 0.5 * (r1 + r2)
        off = np.where(wet, 0.5 * (r2 - r1), 0.0)
        res_h = diag * dq + s * off * dE
        res_u = (off / s) * dq + diag * dE
        return res_h, res_u

    ph, pu = apply(r1p, r2p, d_p[0], d_p[1])
    mh, mu = apply(r1m, r2m, d_m[0], d_m[1])
    d_pt_h = -(ph + mh)
    d_pt_u = -(pu + mu)
    # negative stage depths are inadmissible: poison the update so the NaN
    # detection criterion flags the neighborhood
    negative = h < 0
    if np.any(negative):
        d_pt_h = np.where(negative, np.nan, d_pt_h)
        d_pt_u = np.where(negative, np.nan, d_pt_u)
    if troubled_nodes is not None and np.any(troubled_nodes):
        from .mood import parachute_rd
        fh, fu = parachute_rd(state, eq, grid, bathy, config, bcs)
        d_pt_h = np.where(troubled_nodes, fh, d_pt_h)
        d_pt_u = np.where(troubled_nodes, fu, d_pt_u)
    return d_pt_h, d_pt_u

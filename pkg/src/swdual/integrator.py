"""SSP-RK3 time stepping of the coupled average/point systems with the
MOOD accept/repair loop."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mood
from .boundary import BoundaryPair, apply_point_bc, pinned_components
from .equilibrium import assemble_equilibrium
from .fv import fv_rhs
from .grid import Bathymetry, DualState, Grid, SchemeConfig
from .rd import rd_rhs


class SolverError(RuntimeError):
    """Raised when a run cannot continue (dt underflow, negative depth)."""


@dataclass
class StepRecord:
    t: float
    dt: float
    a_max: float
    troubled_count: int
    residual: float


def max_wave_speed(state: DualState, eq, config: SchemeConfig) -> float:
    """Fastest characteristic speed |u| + sqrt(g h) over nodes and centers."""
    g = config.g
    node = np.abs(state.pt_u) + np.sqrt(g * np.maximum(state.pt_h, 0.0))
    cen = np.abs(eq.u_centers) + np.sqrt(g * np.maximum(eq.h_centers, 0.0))
    return max(float(node.max()), float(cen.max()), 1e-12)


def _dry_fix(state: DualState, config: SchemeConfig) -> None:
    """Zero velocities/discharge where the depth is below the dry tolerance;
    keeps dry bathymetry gradients from spinning up phantom velocities."""
    dry_n = state.pt_h < config.eps_desing
    if np.any(dry_n):
        state.pt_u[dry_n] = 0.0
    dry_c = state.avg_h < config.eps_desing
    if np.any(dry_c):
        state.avg_q[dry_c] = 0.0


def _full_rhs(state: DualState, grid: Grid, bathy: Bathymetry,
              config: SchemeConfig, bcs: BoundaryPair,
              troubled_nodes=None, eq=None):
    """Shared rhs assembly for both systems; returns four arrays."""
    if eq is None:
        eq = assemble_equilibrium(state, grid, bathy, config)
    fvr = fv_rhs(state, eq, grid, bathy, config, bcs, troubled_nodes)
    d_pt_h, d_pt_u = rd_rhs(state, eq, grid, config, bcs, troubled_nodes,
                            bathy=bathy)
    pin_h, pin_u = pinned_components(state, bcs, config)
    if np.any(pin_h):
        d_pt_h[pin_h] = 0.0
    if np.any(pin_u):
        d_pt_u[pin_u] = 0.0
    return fvr.d_avg_h, fvr.d_avg_q, d_pt_h, d_pt_u


def _euler(state: DualState, dt: float, rhs) -> DualState:
    dah, daq, dph, dpu = rhs
    return DualState(state.avg_h + dt * dah, state.avg_q + dt * daq,
                     state.pt_h + dt * dph, state.pt_u + dt * dpu)


def _blend(a: DualState, wa: float, b: DualState, wb: float) -> DualState:
    """Convex combination wa*a + wb*b with wa + wb = 1, evaluated as
    a + wb*(b - a) so an unchanged state stays bitwise unchanged."""
    return DualState(a.avg_h + wb * (b.avg_h - a.avg_h),
                     a.avg_q + wb * (b.avg_q - a.avg_q),
                     a.pt_h + wb * (b.pt_h - a.pt_h),
                     a.pt_u + wb * (b.pt_u - a.pt_u))


def ssp_rk3_step(state: DualState, dt: float, rhs_fn, post_fn=None) -> DualState:
    """Three-stage Shu-Osher SSP-RK3 step; post_fn re-imposes boundary
    conditions after each stage."""
    def post(s):
        if post_fn is not None:
            post_fn(s)
        return s

    u1 = post(_euler(state, dt, rhs_fn(state)))
    u2 = post(_blend(state, 0.75, _euler(u1, dt, rhs_fn(u1)), 0.25))
    return post(_blend(state, 1.0 / 3.0, _euler(u2, dt, rhs_fn(u2)), 2.0 / 3.0))


def _clamp_roundoff_negatives(state: DualState) -> None:
    """Flush depth round-off noise at the dry floor to exactly zero."""
    for arr in (state.avg_h, state.pt_h):
        tiny = (arr < 0.0) & (arr > -1e-12)
        if np.any(tiny):
            arr[tiny] = 0.0


def advance(scenario, config: SchemeConfig, t_final: float,
            state: DualState | None = None, t0: float = 0.0,
            collect_records: bool = True):
    """March the scenario from t0 to t_final; returns (state, records)."""
    grid, bathy, bcs = scenario.grid, scenario.bathymetry, scenario.bcs
    if bcs.periodic and config.manning_n != 0.0:
        raise ValueError("periodic boundaries require manning_n = 0 "
                         "(the friction integral has no periodic anchor)")
    if state is None:
        state = scenario.state0.copy()
    t = float(t0)
    records: list[StepRecord] = []

    def post_stage(s: DualState) -> None:
        apply_point_bc(s, bcs, config)
        _dry_fix(s, config)

    while t < t_final - 1e-14 * max(1.0, abs(t_final)):
        eq0 = assemble_equilibrium(state, grid, bathy, config)
        a_max = max_wave_speed(state, eq0, config)
        dt = config.cfl * grid.dx / a_max
        dt = min(dt, t_final - t)
        if dt < 1e-14 * max(t_final, 1.0):
            raise SolverError(f"time step underflow at t={t!r} (dt={dt!r})")

        first_call = {"eq": eq0}

        def rhs(s, troubled=None):
            eq = first_call.pop("eq", None) if s is state else None
            return _full_rhs(s, grid, bathy, config, bcs, troubled, eq=eq)

        candidate = ssp_rk3_step(state, dt, rhs, post_stage)
        troubled_count = 0
        if config.mood_enabled:
            report = mood.detect(candidate, state, grid, config, bcs)
            troubled_cells = report.troubled
            # repair, then re-detect: a repaired step can push a previously
            # clean near-dry cell inadmissible, so grow the flagged set until
            # it stabilizes
            for _ in range(grid.n_cells):
                if not np.any(troubled_cells):
                    break
                troubled_count = int(np.count_nonzero(troubled_cells))
                flagged = mood.nodes_adjacent_to_cells(troubled_cells, bcs)
                first_call["eq"] = eq0

                def rhs_repair(s):
                    eq = first_call.pop("eq", None) if s is state else None
                    return _full_rhs(s, grid, bathy, config, bcs, flagged,
                                     eq=eq)

                candidate = ssp_rk3_step(state, dt, rhs_repair, post_stage)
                recheck = mood.detect(candidate, state, grid, config, bcs)
                new_cells = recheck.troubled & ~troubled_cells
                if not np.any(new_cells):
                    break
                troubled_cells = troubled_cells | new_cells

        _clamp_roundoff_negatives(candidate)
        if np.any(candidate.avg_h < 0) or np.any(candidate.pt_h < 0):
            raise SolverError(f"negative water depth after accepted step at t={t}")
        if not (np.all(np.isfinite(candidate.avg_h))
                and np.all(np.isfinite(candidate.pt_h))):
            raise SolverError(f"non-finite state after accepted step at t={t}")

        if collect_records:
            res = max(
                np.max(np.abs(candidate.avg_h - state.avg_h)),
                np.max(np.abs(candidate.avg_q - state.avg_q)),
                np.max(np.abs(candidate.pt_h - state.pt_h)),
                np.max(np.abs(candidate.pt_u - state.pt_u)),
            ) / dt
            records.append(StepRecord(t=t + dt, dt=dt, a_max=a_max,
                                      troubled_count=troubled_count,
                                      residual=float(res)))
        state = candidate
        t += dt

    return state, records

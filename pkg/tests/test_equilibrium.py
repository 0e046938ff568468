"""Reconstruction, friction integral, and energy/discharge field assembly."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from swdual.equilibrium import (assemble_equilibrium, compute_Q, desingularize,
                                interpolate_center, interpolate_quarter)
from swdual.grid import Bathymetry, DualState, Grid, SchemeConfig


def ulp_close(actual, expected, n_ulp=8):
    """True when actual is within n_ulp floating-point spacings of expected."""
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    spacing = np.spacing(np.maximum(np.abs(expected), 1e-300))
    return np.all(np.abs(actual - expected) <= n_ulp * spacing)


class TestDesingularize:
    def test_plain_division(self):
        assert desingularize(3.0, 2.0) == 1.5

    def test_small_denominator_cut(self):
        assert desingularize(1.0, 1e-12) == 0.0

    def test_dry_state(self):
        assert desingularize(0.0, 0.0) == 0.0

    @given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
    def test_total_and_finite(self, a, b):
        out = desingularize(a, b)
        assert np.isfinite(out)

    def test_array_input(self):
        out = desingularize(np.array([3.0, 1.0]), np.array([2.0, 0.0]))
        np.testing.assert_allclose(out, [1.5, 0.0])


class TestInterpolants:
    def test_center_constant(self):
        assert interpolate_center(5.0, 5.0, 5.0) == 5.0

    def test_center_linear(self):
        assert interpolate_center(0.0, 0.5, 1.0) == 0.5

    def test_center_quadratic(self):
        # u(x) = x^2 on [0, 1]: mean 1/3, midpoint value 1/4
        assert interpolate_center(0.0, 1.0 / 3.0, 1.0) == pytest.approx(0.25)

    def test_quarter_constant(self):
        assert interpolate_quarter(3.0, 3.0, 3.0) == 3.0

    def test_quarter_linear(self):
        assert interpolate_quarter(0.0, 0.5, 1.0) == pytest.approx(0.25)

    def test_quarter_quadratic(self):
        assert interpolate_quarter(0.0, 1.0 / 3.0, 1.0) == pytest.approx(1.0 / 16.0)

    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10),
           st.floats(-5, 5), st.floats(0.01, 10))
    def test_quadratic_exactness(self, a, b, c, x0, dx):
        # u(x) = a x^2 + b x + c sampled on [x0, x0 + dx]
        def u(x):
            return a * x * x + b * x + c

        xl, xr = x0, x0 + dx
        mean = (a * (xl * xl + xl * xr + xr * xr) / 3.0
                + b * (xr + xl) / 2.0 + c)
        center = interpolate_center(u(xl), mean, u(xr))
        quarter = interpolate_quarter(u(xl), mean, u(xr))
        # ulps measured at the scale of the formula's operands: the weighted
        # sums cancel, so the achievable accuracy is set by the largest term
        scale = np.spacing(1.5 * abs(mean) + 0.35 * (abs(u(xl)) + abs(u(xr)))
                           + 1.0)
        assert abs(center - u(x0 + 0.5 * dx)) <= 8 * scale
        assert abs(quarter - u(x0 + 0.25 * dx)) <= 8 * scale


def _constant_state(grid, h, u):
    return DualState(avg_h=np.full(grid.n_cells, h),
                     avg_q=np.full(grid.n_cells, h * u),
                     pt_h=np.full(grid.n_nodes, h),
                     pt_u=np.full(grid.n_nodes, u))


class TestComputeQ:
    def test_zero_manning(self):
        grid = Grid(0.0, 1.0, 10)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.0)
        qn, qc = compute_Q(_constant_state(grid, 1.0, 1.0), grid, bathy, config)
        assert np.all(qn == 0.0) and np.all(qc == 0.0)

    def test_zero_discharge(self):
        grid = Grid(0.0, 1.0, 10)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.05)
        qn, qc = compute_Q(_constant_state(grid, 2.0, 0.0), grid, bathy, config)
        assert np.all(qn == 0.0) and np.all(qc == 0.0)

    def test_constant_integrand_increment(self):
        # h = 1, q = 1: integrand g n^2 = 9.812 * 0.0025; over dx = 0.1 the
        # per-cell increment is 2.453e-3 (quadrature exact on constants)
        grid = Grid(0.0, 1.0, 10)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.05)
        qn, qc = compute_Q(_constant_state(grid, 1.0, 1.0), grid, bathy, config)
        inc = np.diff(qn)
        np.testing.assert_allclose(inc, 9.812 * 0.0025 * 0.1, rtol=1e-14)
        np.testing.assert_allclose(qc, qn[:-1] + 0.5 * inc, rtol=1e-13)

    def test_anchored_at_left(self):
        grid = Grid(0.0, 1.0, 10)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.05)
        qn, _ = compute_Q(_constant_state(grid, 1.0, 2.0), grid, bathy, config)
        assert qn[0] == 0.0

    def test_additive_prefix(self):
        rng = np.random.default_rng(7)
        grid = Grid(0.0, 1.0, 16)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.05)
        state = DualState(avg_h=1.0 + 0.2 * rng.random(16),
                          avg_q=1.0 + 0.1 * rng.random(16),
                          pt_h=1.0 + 0.2 * rng.random(17),
                          pt_u=1.0 + 0.1 * rng.random(17))
        qn, _ = compute_Q(state, grid, bathy, config)
        inc = np.diff(qn)
        # prefix sums rebuild the node values bitwise
        np.testing.assert_array_equal(qn, np.concatenate(([0.0], np.cumsum(inc))))

    def test_sign_follows_discharge(self):
        grid = Grid(0.0, 1.0, 10)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig(manning_n=0.05)
        qn_pos, _ = compute_Q(_constant_state(grid, 1.0, 2.0), grid, bathy, config)
        qn_neg, _ = compute_Q(_constant_state(grid, 1.0, -2.0), grid, bathy, config)
        assert np.all(qn_pos[1:] > 0)
        np.testing.assert_allclose(qn_neg, -qn_pos, rtol=1e-14)


class TestAssembleEquilibrium:
    def test_lake_at_rest_energy_constant(self):
        grid = Grid(-1.0, 1.0, 40)
        bathy = Bathymetry.from_callable(
            grid, lambda x: 0.1 * (1.0 + np.cos(np.pi * x)))
        config = SchemeConfig()
        w = 4.000001
        pt_h = w - bathy.z_nodes
        h_c = w - bathy.z_centers
        avg_h = (2.0 / 3.0) * h_c + (pt_h[:-1] + pt_h[1:]) / 6.0
        state = DualState(avg_h=avg_h, avg_q=np.zeros(grid.n_cells),
                          pt_h=pt_h, pt_u=np.zeros(grid.n_nodes))
        eq = assemble_equilibrium(state, grid, bathy, config)
        np.testing.assert_allclose(eq.E_nodes, 9.812 * w, rtol=1e-14)
        np.testing.assert_allclose(eq.E_centers, 9.812 * w, rtol=1e-13)
        assert np.all(eq.q_nodes == 0.0)

    def test_flat_supercritical_energy(self):
        grid = Grid(0.0, 1.0, 4)
        bathy = Bathymetry.flat(grid)
        config = SchemeConfig()
        eq = assemble_equilibrium(_constant_state(grid, 2.0, 12.0), grid,
                                  bathy, config)
        np.testing.assert_allclose(eq.E_nodes, 91.624, rtol=1e-14)
        np.testing.assert_allclose(eq.q_nodes, 24.0, rtol=1e-14)

    def test_dry_node(self):
        grid = Grid(0.0, 1.0, 4)
        bathy = Bathymetry.from_callable(grid, lambda x: 0.3)
        config = SchemeConfig()
        state = _constant_state(grid, 0.0, 0.0)
        eq = assemble_equilibrium(state, grid, bathy, config)
        np.testing.assert_allclose(eq.E_nodes, 9.812 * 0.3, rtol=1e-14)
        assert np.all(eq.u_centers == 0.0)

    def test_steady_data_collapse(self):
        # depth profile from a constant-energy moving equilibrium: the
        # assembled (q, E) fields must be constant to round-off
        from swdual.scenarios import build
        scen = build("ex3-steady-b", 100, SchemeConfig())
        eq = assemble_equilibrium(scen.state0, scen.grid, scen.bathymetry,
                                  scen.config)
        for arr, ref in ((eq.q_nodes, 4.42), (eq.q_centers, 4.42)):
            np.testing.assert_allclose(arr, ref, rtol=1e-12)
        e_ref = eq.E_nodes[0]
        np.testing.assert_allclose(eq.E_nodes, e_ref, rtol=1e-12)
        np.testing.assert_allclose(eq.E_centers, e_ref, rtol=1e-12)

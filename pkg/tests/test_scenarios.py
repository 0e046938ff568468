"""Scenario construction: steady-depth solvers, the dam-break similarity
solution, and registry invariants."""

import numpy as np
import pytest

from swdual.equilibrium import assemble_equilibrium
from swdual.grid import SchemeConfig
from swdual.scenarios import (available_scenarios, build, exact_dambreak,
                              newton_depth_from_equilibrium,
                              steady_depth_cubic)

G = 9.812


class TestSteadyDepthSolvers:
    def test_cubic_and_newton_agree(self):
        # two independent routes to the same depth: closed-form cubic roots
        # vs safeguarded Newton on the energy relation
        rng = np.random.default_rng(21)
        config = SchemeConfig()
        checked = 0
        for _ in range(100):
            q = rng.uniform(0.1, 30.0)
            z = rng.uniform(0.0, 0.5)
            h_crit = (q * q / G) ** (1.0 / 3.0)
            e = G * z + 1.5 * G * h_crit * rng.uniform(1.05, 3.0)
            for regime in ("subcritical", "supercritical"):
                h_c = steady_depth_cubic(q, e, z, regime, 0.0, 1.0, config)
                h_n = newton_depth_from_equilibrium(q, e, z, 0.0, regime,
                                                    config)
                assert abs(h_c - h_n) <= 1e-10 * max(1.0, h_c)
                checked += 1
        assert checked == 200

    def test_roots_satisfy_energy_relation(self):
        config = SchemeConfig()
        h = steady_depth_cubic(24.0, 91.624, 0.0, "supercritical", 0.0, 1.0,
                               config)
        assert 24.0 ** 2 / (2 * h * h) + G * h == pytest.approx(91.624,
                                                                rel=1e-12)
        # the designed inflow state h = 2, u = 12 is exactly that root
        assert h == pytest.approx(2.0, rel=1e-12)

    def test_branch_ordering(self):
        config = SchemeConfig()
        q, e = 4.42, 4.42 ** 2 / 8.0 + G * 2.0
        sub = steady_depth_cubic(q, e, 0.0, "subcritical", 0.0, 1.0, config)
        sup = steady_depth_cubic(q, e, 0.0, "supercritical", 0.0, 1.0, config)
        h_crit = (q * q / G) ** (1.0 / 3.0)
        assert sup < h_crit < sub

    def test_newton_still_water(self):
        config = SchemeConfig()
        h = newton_depth_from_equilibrium(0.0, G * 3.0, 0.5, 0.0,
                                          "subcritical", config)
        assert h == pytest.approx(2.5, rel=1e-14)

    def test_energy_below_critical_rejected(self):
        config = SchemeConfig()
        with pytest.raises(ValueError):
            newton_depth_from_equilibrium(24.0, 1.0, 0.0, 0.0, "subcritical",
                                          config)


class TestExactDambreak:
    def test_initial_step(self):
        config = SchemeConfig()
        x = np.linspace(-10, 10, 101)
        h, u = exact_dambreak(10.0, 1.0, x, 0.0, config)
        np.testing.assert_array_equal(h, np.where(x < 0, 10.0, 1.0))
        np.testing.assert_array_equal(u, 0.0)

    def test_far_field_states_preserved(self):
        config = SchemeConfig()
        t = 8.0
        cl = np.sqrt(G * 10.0)
        x = np.array([-cl * t - 1.0, 130.0])
        h, u = exact_dambreak(10.0, 1.0, x, t, config)
        assert h[0] == 10.0 and u[0] == 0.0
        assert h[1] == 1.0 and u[1] == 0.0

    def test_depth_monotone_decreasing(self):
        config = SchemeConfig()
        x = np.linspace(-150, 150, 4001)
        h, _ = exact_dambreak(10.0, 1.0, x, 8.0, config)
        assert np.all(np.diff(h) <= 1e-12)

    def test_shock_satisfies_jump_conditions(self):
        config = SchemeConfig()
        t = 8.0
        x = np.linspace(-150, 150, 60001)
        h, u = exact_dambreak(10.0, 1.0, x, t, config)
        q = h * u
        jump = np.argmax(-np.diff(h))
        h_m, u_m = h[jump], u[jump]
        h_r, u_r = h[jump + 1], u[jump + 1]
        s = (h_m * u_m - h_r * u_r) / (h_m - h_r)

        def f2(hh, uu):
            return hh * uu * uu + 0.5 * G * hh * hh

        # momentum jump condition at the same speed
        lhs = s * (h_m * u_m - h_r * u_r)
        rhs = f2(h_m, u_m) - f2(h_r, u_r)
        assert lhs == pytest.approx(rhs, rel=1e-6)
        # shock sits at x = s t
        assert x[jump] == pytest.approx(s * t, abs=0.02)

    def test_rarefaction_invariant_constant(self):
        # u + 2 sqrt(g h) is constant through the left fan
        config = SchemeConfig()
        t = 8.0
        x = np.linspace(-150, 150, 8001)
        h, u = exact_dambreak(10.0, 1.0, x, t, config)
        cl = np.sqrt(G * 10.0)
        fan = (x / t > -cl + 0.1) & (u > 1e-6) & (np.abs(np.diff(h,
                                                   append=h[-1])) > 1e-9)
        inv = u[fan] + 2.0 * np.sqrt(G * h[fan])
        np.testing.assert_allclose(inv, 2.0 * cl, rtol=1e-10)

    def test_dry_front(self):
        config = SchemeConfig()
        t = 2.0
        cl = np.sqrt(G * 2.0)
        x = np.linspace(-25, 25, 4001)
        h, u = exact_dambreak(2.0, 0.0, x, t, config)
        assert np.all(h >= 0.0)
        beyond = x / t > 2.0 * cl
        np.testing.assert_array_equal(h[beyond], 0.0)
        # front tip moves at twice the initial wave speed
        wet = np.where(h > 0)[0]
        assert x[wet[-1]] == pytest.approx(2.0 * cl * t, abs=0.05)

    def test_invalid_arguments_rejected(self):
        config = SchemeConfig()
        with pytest.raises(ValueError):
            exact_dambreak(1.0, 2.0, np.array([0.0]), 1.0, config)
        with pytest.raises(ValueError):
            exact_dambreak(1.0, -0.5, np.array([0.0]), 1.0, config)


class TestRegistry:
    def test_all_names_build(self):
        for name in available_scenarios():
            scen = build(name)
            assert scen.grid.n_cells >= 4
            assert np.all(scen.state0.avg_h >= 0.0)
            assert np.all(scen.state0.pt_h >= 0.0)
            assert np.all(np.isfinite(scen.state0.avg_q))
            assert scen.t_final > 0.0

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            build("no-such-case")

    def test_cell_count_override(self):
        scen = build("ex5-dambreak", 150)
        assert scen.grid.n_cells == 150

    @pytest.mark.parametrize("name", ["ex3-steady-a", "ex3-steady-b",
                                      "ex3-steady-c", "ex8-steady-a",
                                      "ex8-steady-b", "appE-test1-b"])
    def test_steady_scenarios_have_constant_invariants(self, name):
        scen = build(name, 100)
        eq = assemble_equilibrium(scen.state0, scen.grid, scen.bathymetry,
                                  scen.config)
        q_spread = np.ptp(eq.q_nodes)
        e_spread = np.ptp(eq.E_nodes)
        scale = max(1.0, np.abs(eq.q_nodes).max(), np.abs(eq.E_nodes).max())
        assert q_spread <= 1e-11 * scale, f"q spread {q_spread}"
        assert e_spread <= 1e-11 * scale, f"E spread {e_spread}"

    @pytest.mark.parametrize("name", ["ex2-perturbation", "ex3-perturb-a",
                                      "ex8-perturb-b"])
    def test_perturbation_touches_only_cell_depths(self, name):
        scen = build(name, 100)
        ref = scen.steady_reference
        assert ref is not None
        assert np.array_equal(scen.state0.pt_h, ref.pt_h)
        assert np.array_equal(scen.state0.pt_u, ref.pt_u)
        assert np.array_equal(scen.state0.avg_q, ref.avg_q)
        diff = scen.state0.avg_h - ref.avg_h
        assert np.abs(diff).max() > 0.0
        # the bump is localized: most cells untouched
        assert np.count_nonzero(np.abs(diff) > 1e-13) < scen.grid.n_cells / 2

    def test_lake_at_rest_is_bitwise_still(self):
        scen = build("ex2-lake-at-rest", 100)
        assert np.all(scen.state0.avg_q == 0.0)
        assert np.all(scen.state0.pt_u == 0.0)

    def test_friction_scenarios_set_manning(self):
        assert build("ex7-friction-a", 100).config.manning_n > 0.0
        assert build("ex8-steady-b", 100).config.manning_n > 0.0
        assert build("ex3-steady-a", 100).config.manning_n == 0.0

"""Command-line harness: norms, CSV artifacts, exit codes, determinism."""

import filecmp
import os

import numpy as np
import pytest

from swdual.cli import (ConfigError, load_config_file, main, norms, read_csv,
                        runge_error, write_csv, write_snapshot)
from swdual.scenarios import build


class TestNorms:
    def test_hand_values(self):
        l1, linf = norms([0.0, 1.0], [1.0, 3.0], 0.5)
        assert l1 == pytest.approx(1.5)
        assert linf == pytest.approx(2.0)

    def test_identical_fields(self):
        l1, linf = norms([2.0, 2.0], [2.0, 2.0], 0.1)
        assert l1 == 0.0 and linf == 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            norms([1.0, 2.0], [1.0], 0.5)


class TestRungeError:
    def test_second_order_example(self):
        # halving the mesh quarters the differences: 0.25^2 / (1 - 0.25)
        assert runge_error(0.25, 1.0) == pytest.approx(0.25 ** 2 / 0.75)

    def test_zero_fine_difference(self):
        assert runge_error(0.0, 1.0) == 0.0

    def test_stalled_differences_rejected(self):
        with pytest.raises(ValueError):
            runge_error(0.5, 0.5)


class TestCsvRoundTrip:
    def test_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(31)
        cols = [rng.standard_normal(17) * 10.0 ** rng.integers(-12, 12, 17),
                rng.standard_normal(17)]
        path = str(tmp_path / "data.csv")
        write_csv(path, ["a", "b"], cols)
        header, data = read_csv(path)
        assert header == ["a", "b"]
        np.testing.assert_array_equal(data["a"], cols[0])
        np.testing.assert_array_equal(data["b"], cols[1])

    def test_snapshot_at_t0_is_bit_exact(self, tmp_path):
        scen = build("ex3-steady-b", 50)
        paths = write_snapshot(str(tmp_path), scen.name, 0.0, scen,
                               scen.state0)
        cells = [p for p in paths if p.endswith("_cells.csv")][0]
        nodes = [p for p in paths if p.endswith("_nodes.csv")][0]
        _, cdata = read_csv(cells)
        np.testing.assert_array_equal(cdata["avg_h"], scen.state0.avg_h)
        np.testing.assert_array_equal(cdata["avg_q"], scen.state0.avg_q)
        np.testing.assert_array_equal(cdata["x_center"], scen.grid.centers)
        _, ndata = read_csv(nodes)
        np.testing.assert_array_equal(ndata["h"], scen.state0.pt_h)
        np.testing.assert_array_equal(ndata["u"], scen.state0.pt_u)


class TestConfigFile:
    def test_overrides_parsed(self, tmp_path):
        path = tmp_path / "scheme.ini"
        path.write_text("[scheme]\ncfl = 0.2\nmanning_n = 0.05\n"
                        "mood_enabled = false\n")
        overrides = load_config_file(str(path))
        assert overrides == {"cfl": 0.2, "manning_n": 0.05,
                             "mood_enabled": False}

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "scheme.ini"
        path.write_text("[scheme]\nnot_an_option = 1\n")
        with pytest.raises(ConfigError):
            load_config_file(str(path))

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "scheme.ini"
        path.write_text("[other]\ncfl = 0.2\n")
        with pytest.raises(ConfigError):
            load_config_file(str(path))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(str(tmp_path / "nope.ini"))


class TestMainExitCodes:
    def test_list_ok(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "ex5-dambreak" in out and "ex7-friction-a" in out

    def test_unknown_scenario_is_config_error(self, tmp_path, capsys):
        code = main(["run", "no-such-case", "--out", str(tmp_path)])
        assert code == 3
        assert "no-such-case" in capsys.readouterr().err

    def test_bad_levels_is_config_error(self, tmp_path):
        assert main(["converge", "ex1-accuracy", "--levels", "banana",
                     "--out", str(tmp_path)]) == 3

    def test_solver_failure_exit_code(self, tmp_path, capsys):
        # the unlimited scheme cannot cross the dry front: the run must stop
        # with the solver exit code, not a traceback
        code = main(["run", "ex6-dry-riemann", "--no-mood",
                     "--out", str(tmp_path)])
        assert code == 2
        assert "solver abort" in capsys.readouterr().err

    def test_run_writes_artifacts(self, tmp_path, capsys):
        code = main(["run", "ex8-steady-a", "--cells", "50",
                     "--t-final", "0.05", "--out", str(tmp_path)])
        assert code == 0
        names = sorted(os.listdir(tmp_path))
        assert any(n.endswith("_cells.csv") for n in names)
        assert any(n.endswith("_nodes.csv") for n in names)
        assert any(n.endswith("_steps.csv") for n in names)
        assert any(n.endswith("_run.json") for n in names)

    def test_out_root_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SWDUAL_OUT", str(tmp_path / "env_root"))
        assert main(["run", "ex8-steady-a", "--cells", "50",
                     "--t-final", "0.02"]) == 0
        assert (tmp_path / "env_root").is_dir()
        assert any(p.name.endswith("_run.json")
                   for p in (tmp_path / "env_root").iterdir())

    def test_reruns_are_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert main(["run", "ex5-dambreak", "--cells", "60",
                         "--t-final", "0.4", "--out", str(out)]) == 0
        for name in sorted(os.listdir(a)):
            if name.endswith(".csv"):
                assert filecmp.cmp(a / name, b / name, shallow=False), name

    def test_converge_small_ladder(self, tmp_path, capsys):
        code = main(["converge", "ex1-accuracy", "--levels", "16..64",
                     "--t-final", "0.01", "--out", str(tmp_path)])
        assert code == 0
        files = [n for n in os.listdir(tmp_path) if "convergence" in n]
        assert len(files) == 2
        _, data = read_csv(str(tmp_path / files[0]))
        assert data["dx"].size == 1

    def test_wb_check_reports_small_errors(self, tmp_path, capsys):
        code = main(["wb-check", "ex2-lake-at-rest", "--cells", "50",
                     "--t-final", "0.5", "--out", str(tmp_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "avg_h" in out
        _, data = read_csv(str(tmp_path / "ex2-lake-at-rest_wb_errors.csv"))
        assert np.all(data["Linf"] <= 1e-12)

"""Command-line front end: scenario runs with CSV/JSON artifacts, the
convergence-ladder harness, and well-balance error summaries."""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import os
import sys

import numpy as np

from . import scenarios
from .equilibrium import assemble_equilibrium
from .grid import SchemeConfig
from .integrator import SolverError, advance

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_CONFIG = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# error norms and the Runge estimator

def norms(a, b, dx: float):
    """Discrete (L1, Linf) distance between two equal-length fields."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    return float(dx * diff.sum()), float(diff.max())


def runge_error(err_fine: float, err_mid: float) -> float:
    """Error estimate on the finest grid from two consecutive grid-difference
    norms (err_fine between dx and 2dx, err_mid between 2dx and 4dx)."""
    if err_fine == 0.0:
        return 0.0
    if err_fine == err_mid:
        raise ValueError("identical difference norms: rate undefined")
    return err_fine ** 2 / abs(err_fine - err_mid)


# ---------------------------------------------------------------------------
# artifact helpers

def _fmt(v: float) -> str:
    return f"{v:.16e}"


def write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_csv(path: str):
    """Returns (header list, dict of column name -> float array)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        return header, {name: np.array([]) for name in header}
    return header, {name: data[:, k] for k, name in enumerate(header)}


def _snapshot_tag(t: float) -> str:
    return f"{t:g}".replace(".", "p").replace("-", "m")


def write_snapshot(out_dir: str, name: str, t: float, scenario, state) -> list[str]:
    eq = assemble_equilibrium(state, scenario.grid, scenario.bathymetry,
                              scenario.config)
    tag = _snapshot_tag(t)
    grid, bathy = scenario.grid, scenario.bathymetry
    cell_path = os.path.join(out_dir, f"{name}_t{tag}_cells.csv")
    write_csv(cell_path,
              ["x_center", "avg_h", "avg_q", "surface", "E_center"],
              [grid.centers, state.avg_h, state.avg_q,
               state.avg_h + bathy.z_centers, eq.E_centers])
    node_path = os.path.join(out_dir, f"{name}_t{tag}_nodes.csv")
    write_csv(node_path,
              ["x_node", "h", "u", "q", "E", "Q"],
              [grid.nodes, state.pt_h, state.pt_u,
               eq.q_nodes, eq.E_nodes, eq.Q_nodes])
    return [cell_path, node_path]


def write_step_log(out_dir: str, name: str, records) -> str:
    path = os.path.join(out_dir, f"{name}_steps.csv")
    write_csv(path,
              ["t", "dt", "a_max", "troubled_cells", "residual"],
              [np.array([r.t for r in records]),
               np.array([r.dt for r in records]),
               np.array([r.a_max for r in records]),
               np.array([float(r.troubled_count) for r in records]),
               np.array([r.residual for r in records])])
    return path


def write_sidecar(out_dir: str, name: str, scenario, records,
                  artifacts: list[str]) -> str:
    total_troubled = int(sum(r.troubled_count for r in records))
    meta = {
        "scenario": scenario.name,
        "n_cells": scenario.grid.n_cells,
        "t_final": scenario.t_final,
        "config": dataclasses.asdict(scenario.config),
        "steps": len(records),
        "troubled_cell_flags_total": total_troubled,
        "artifacts": [os.path.basename(p) for p in artifacts],
    }
    path = os.path.join(out_dir, f"{name}_run.json")
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# configuration plumbing

_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(SchemeConfig)}


def load_config_file(path: str) -> dict:
    """Flat INI-style overrides; all [scheme] keys map onto SchemeConfig."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    overrides = {}
    for section in parser.sections():
        if section != "scheme":
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _CONFIG_FIELDS:
                raise ConfigError(f"unknown scheme option {key!r}")
            if key == "mood_enabled":
                overrides[key] = parser.getboolean(section, key)
            else:
                overrides[key] = float(raw)
    return overrides


def _resolve_out(args) -> str:
    root = os.environ.get("SWDUAL_OUT", ".")
    out = args.out if args.out is not None else root
    os.makedirs(out, exist_ok=True)
    return out


def _base_config(args) -> SchemeConfig:
    overrides = {}
    if getattr(args, "config", None):
        overrides.update(load_config_file(args.config))
    if getattr(args, "no_mood", False):
        overrides["mood_enabled"] = False
    try:
        return dataclasses.replace(SchemeConfig(), **overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _build_scenario(args, n_cells=None):
    try:
        return scenarios.build(args.scenario, n_cells or args.cells,
                               _base_config(args))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_run(args) -> int:
    scenario = _build_scenario(args)
    t_final = args.t_final if args.t_final is not None else scenario.t_final
    snaps = sorted(args.snap_times or [t_final])
    if snaps[0] < 0.0 or snaps[-1] > t_final + 1e-12:
        raise ConfigError("snapshot times must lie within [0, t_final]")
    out = _resolve_out(args)

    artifacts = []
    state = scenario.state0.copy()
    records = []
    t = 0.0
    for t_snap in snaps:
        if t_snap > t:
            state, recs = advance(scenario, scenario.config, t_snap,
                                  state=state, t0=t)
            records.extend(recs)
            t = t_snap
        artifacts += write_snapshot(out, scenario.name, t_snap, scenario, state)
    if t < t_final:
        state, recs = advance(scenario, scenario.config, t_final,
                              state=state, t0=t)
        records.extend(recs)
    artifacts.append(write_step_log(out, scenario.name, records))
    write_sidecar(out, scenario.name, scenario, records, artifacts)
    print(f"{scenario.name}: {len(records)} steps to t={t_final:g}, "
          f"artifacts in {out}")
    return EXIT_OK


def _restrict_nodes(fine):
    return fine[::2]


def _restrict_cells(fine):
    return 0.5 * (fine[::2] + fine[1::2])


def convergence_table(scenario_name: str, levels: list[int], t_final: float,
                      config: SchemeConfig):
    """Runs the grid ladder and returns (dx, error, rate) rows per field.

    Result maps field name -> list of rows (dx, error, rate|nan); errors are
    Runge estimates in L1, so rows start at the third ladder level.
    """
    solutions = {}
    for n in levels:
        scen = scenarios.build(scenario_name, n, config)
        state, _ = advance(scen, scen.config, t_final)
        solutions[n] = (scen.grid, state)

    fields = {"pt_h": [], "pt_u": [], "avg_h": [], "avg_q": []}
    diffs = {k: {} for k in fields}
    for n_coarse, n_fine in zip(levels[:-1], levels[1:]):
        if n_fine != 2 * n_coarse:
            raise ConfigError("ladder levels must double")
        gc, sc = solutions[n_coarse]
        _, sf = solutions[n_fine]
        for name in fields:
            fine = getattr(sf, name)
            coarse = getattr(sc, name)
            restrict = _restrict_nodes if name.startswith("pt") else _restrict_cells
            l1, _ = norms(restrict(fine), coarse, gc.dx)
            diffs[name][n_fine] = l1

    rows = {name: [] for name in fields}
    for name in fields:
        prev_err = None
        for n in levels[2:]:
            err = runge_error(diffs[name][n], diffs[name][n // 2])
            dx = solutions[n][0].dx
            rate = float("nan") if prev_err is None else float(
                np.log2(prev_err / err)) if err > 0 else float("inf")
            rows[name].append((dx, err, rate))
            prev_err = err
    return rows


def cmd_converge(args) -> int:
    try:
        lo, hi = (int(s) for s in args.levels.split(".."))
    except ValueError as exc:
        raise ConfigError(f"bad --levels {args.levels!r}") from exc
    levels = []
    n = lo
    while n <= hi:
        levels.append(n)
        n *= 2
    if len(levels) < 3:
        raise ConfigError("need at least three ladder levels")
    out = _resolve_out(args)
    config = _base_config(args)
    scen0 = scenarios.build(args.scenario, levels[0], config)
    t_final = args.t_final if args.t_final is not None else scen0.t_final

    rows = convergence_table(args.scenario, levels, t_final, config)
    for group, fields in (("points", ("pt_h", "pt_u")),
                          ("averages", ("avg_h", "avg_q"))):
        f1, f2 = fields
        path = os.path.join(out, f"{args.scenario}_convergence_{group}.csv")
        dxs = np.array([r[0] for r in rows[f1]])
        write_csv(path, ["dx", f"L1_{f1}", f"rate_{f1}", f"L1_{f2}", f"rate_{f2}"],
                  [dxs,
                   np.array([r[1] for r in rows[f1]]),
                   np.array([r[2] for r in rows[f1]]),
                   np.array([r[1] for r in rows[f2]]),
                   np.array([r[2] for r in rows[f2]])])
        print(f"wrote {path}")
        for r1, r2 in zip(rows[f1], rows[f2]):
            print(f"  dx={r1[0]:.3e}  {f1}: {r1[1]:.3e} (rate {r1[2]:.2f})  "
                  f"{f2}: {r2[1]:.3e} (rate {r2[2]:.2f})")
    return EXIT_OK


def wb_errors(scenario, t_final: float):
    """Final-vs-steady (L1, Linf) errors of the averaged depth and discharge."""
    ref = scenario.steady_reference
    if ref is None:
        raise ConfigError(f"scenario {scenario.name!r} has no steady reference")
    state, _ = advance(scenario, scenario.config, t_final)
    dx = scenario.grid.dx
    out = {}
    out["avg_h"] = norms(state.avg_h, ref.avg_h, dx)
    out["avg_q"] = norms(state.avg_q, ref.avg_q, dx)
    out["pt_h"] = norms(state.pt_h, ref.pt_h, dx)
    out["pt_u"] = norms(state.pt_u, ref.pt_u, dx)
    return out


def cmd_wb_check(args) -> int:
    scenario = _build_scenario(args)
    t_final = args.t_final if args.t_final is not None else scenario.t_final
    errs = wb_errors(scenario, t_final)
    out = _resolve_out(args)
    path = os.path.join(out, f"{scenario.name}_wb_errors.csv")
    names = list(errs)
    write_csv(path, ["field_index", "L1", "Linf"],
              [np.arange(len(names), dtype=float),
               np.array([errs[k][0] for k in names]),
               np.array([errs[k][1] for k in names])])
    for k in names:
        print(f"{scenario.name} {k}: L1={errs[k][0]:.3e} Linf={errs[k][1]:.3e}")
    return EXIT_OK


def cmd_tables(args) -> int:
    """Regenerates the well-balance summaries and the convergence table."""
    out = _resolve_out(args)
    wb_names = (["ex2-lake-at-rest"]
                + [f"ex3-steady-{c}" for c in "abc"]
                + [f"appE-test1-{c}" for c in "abc"])
    rows = []
    for name in wb_names:
        scen = scenarios.build(name, None, _base_config(args))
        errs = wb_errors(scen, scen.t_final)
        rows.append((name, errs))
        print(f"{name}: Linf(avg_h)={errs['avg_h'][1]:.3e} "
              f"Linf(avg_q)={errs['avg_q'][1]:.3e}")
    path = os.path.join(out, "wb_summary.csv")
    with open(path, "w") as fh:
        fh.write("scenario,L1_avg_h,Linf_avg_h,L1_avg_q,Linf_avg_q\n")
        for name, errs in rows:
            fh.write(",".join([name, _fmt(errs["avg_h"][0]),
                               _fmt(errs["avg_h"][1]), _fmt(errs["avg_q"][0]),
                               _fmt(errs["avg_q"][1])]) + "\n")
    print(f"wrote {path}")

    ladder = argparse.Namespace(scenario="ex1-accuracy", levels=args.levels,
                                t_final=None, out=args.out, config=args.config,
                                no_mood=args.no_mood, cells=None)
    return cmd_converge(ladder)


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swdual",
        description="Dual finite-volume / point-value shallow-water solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("scenario", help="scenario id (see `list`)")
        p.add_argument("--cells", type=int, default=None)
        p.add_argument("--t-final", type=float, default=None)
        p.add_argument("--no-mood", action="store_true")
        p.add_argument("--out", default=None,
                       help="output directory (default: $SWDUAL_OUT or cwd)")
        p.add_argument("--config", default=None,
                       help="INI file with [scheme] overrides")

    p_run = sub.add_parser("run", help="advance a scenario and write snapshots")
    common(p_run)
    p_run.add_argument("--snap-times", type=float, nargs="*", default=None)
    p_run.set_defaults(fn=cmd_run)

    p_conv = sub.add_parser("converge", help="grid-ladder convergence study")
    common(p_conv)
    p_conv.add_argument("--levels", default="64..1024",
                        help="cell-count ladder lo..hi, doubling")
    p_conv.set_defaults(fn=cmd_converge)

    p_wb = sub.add_parser("wb-check", help="steady-state preservation errors")
    common(p_wb)
    p_wb.set_defaults(fn=cmd_wb_check)

    p_tab = sub.add_parser("tables", help="regenerate all table artifacts")
    common(p_tab, scenario=False)
    p_tab.add_argument("--levels", default="64..1024")
    p_tab.set_defaults(fn=cmd_tables)

    p_list = sub.add_parser("list", help="list scenario ids")
    p_list.set_defaults(fn=lambda a: (print("\n".join(
        scenarios.available_scenarios())), EXIT_OK)[1])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

"""Plot kinds over solver CSV artifacts.

The renderer consumes the solver's documented CSV files (cell snapshots with
columns x_center/avg_h/avg_q/surface/E_center, and convergence tables with a
dx column followed by L1/rate column pairs) and performs no numerics beyond
plotting transforms: differences, log scaling, and least-squares slope fits
shown in legends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("difference-snapshot", "triptych", "profile", "convergence-loglog")


class RenderError(Exception):
    """Raised for unusable specs or unparseable input files."""


@dataclass
class PlotSpec:
    """One figure: what to read, how to draw it, where to write it."""

    kind: str
    inputs: list[str]
    output: str
    title: str = ""
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RenderError(f"unknown plot kind {self.kind!r} "
                              f"(expected one of {', '.join(KINDS)})")
        if not self.inputs:
            raise RenderError("spec needs at least one input file")
        if not self.output:
            raise RenderError("spec needs an output image path")


def load_csv(path: str):
    """Reads a one-line-header CSV into (header, column dict of arrays).

    Parse failures report the file and 1-based line number.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise RenderError(f"{path}: {exc.strerror or exc}") from exc
    if not lines:
        raise RenderError(f"{path}:1: empty file, expected a header line")
    header = [col.strip() for col in lines[0].split(",")]
    if len(header) < 2 or any(not col for col in header):
        raise RenderError(f"{path}:1: malformed header {lines[0]!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise RenderError(f"{path}:{lineno}: expected {len(header)} "
                              f"fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise RenderError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise RenderError(f"{path}: no data rows")
    data = np.array(rows)
    return header, {name: data[:, j] for j, name in enumerate(header)}


def _need(columns, names, path):
    for name in names:
        if name not in columns:
            raise RenderError(f"{path}: missing column {name!r} "
                              f"(have {', '.join(columns)})")


def _label(spec: PlotSpec, index: int, default: str) -> str:
    if index < len(spec.labels):
        return spec.labels[index]
    return default


def _difference_snapshot(spec: PlotSpec, ax):
    if len(spec.inputs) < 2:
        raise RenderError("difference-snapshot needs the snapshot cells file "
                          "and the reference cells file")
    ref_path = spec.inputs[-1]
    _, ref = load_csv(ref_path)
    _need(ref, ("x_center", "avg_h"), ref_path)
    for i, path in enumerate(spec.inputs[:-1]):
        _, cur = load_csv(path)
        _need(cur, ("x_center", "avg_h"), path)
        if cur["x_center"].shape != ref["x_center"].shape or not np.allclose(
                cur["x_center"], ref["x_center"]):
            raise RenderError(f"{path}: cell centers do not match the "
                              f"reference file {ref_path}")
        ax.plot(cur["x_center"], cur["avg_h"] - ref["avg_h"],
                label=_label(spec, i, path))
    ax.set_xlabel("x")
    ax.set_ylabel("depth average difference")
    ax.legend(fontsize=8)


def _triptych(spec: PlotSpec, fig):
    path = spec.inputs[0]
    _, cur = load_csv(path)
    _need(cur, ("x_center", "avg_h", "avg_q", "surface", "E_center"), path)
    x = cur["x_center"]
    bottom = cur["surface"] - cur["avg_h"]
    ax1, ax2, ax3 = fig.subplots(3, 1, sharex=True)
    ax1.plot(x, cur["surface"], label=_label(spec, 0, "free surface"))
    ax1.plot(x, bottom, color="0.4", label="bottom")
    ax1.fill_between(x, bottom, cur["surface"], alpha=0.2)
    ax1.set_ylabel("elevation")
    ax1.legend(fontsize=8)
    ax2.plot(x, cur["avg_q"])
    ax2.set_ylabel("discharge")
    ax3.plot(x, cur["E_center"])
    ax3.set_ylabel("energy invariant")
    ax3.set_xlabel("x")


def _profile(spec: PlotSpec, ax):
    for i, path in enumerate(spec.inputs):
        _, cur = load_csv(path)
        _need(cur, ("x_center", "avg_h"), path)
        style = "-" if i == 0 else "--"
        ax.plot(cur["x_center"], cur["avg_h"], style,
                label=_label(spec, i, path))
    ax.set_xlabel("x")
    ax.set_ylabel("depth average")
    ax.legend(fontsize=8)


def fitted_slope(dx: np.ndarray, err: np.ndarray) -> float:
    """Least-squares slope of log(err) against log(dx)."""
    good = (dx > 0) & (err > 0)
    if np.count_nonzero(good) < 2:
        raise RenderError("convergence fit needs at least two positive "
                          "(dx, error) points")
    coeffs = np.polyfit(np.log(dx[good]), np.log(err[good]), 1)
    return float(coeffs[0])


def _convergence(spec: PlotSpec, ax):
    path = spec.inputs[0]
    header, cur = load_csv(path)
    _need(cur, ("dx",), path)
    dx = cur["dx"]
    err_cols = [name for name in header if name.startswith("L1_")]
    if not err_cols:
        raise RenderError(f"{path}: no L1_* error columns")
    for i, name in enumerate(err_cols):
        slope = fitted_slope(dx, cur[name])
        ax.loglog(dx, cur[name], "o-",
                  label=f"{_label(spec, i, name)} (slope {slope:.2f})")
    # slope-3 guide anchored at the coarsest point of the first series
    ref = cur[err_cols[0]]
    guide = ref[np.argmax(dx)] * (dx / dx.max()) ** 3
    ax.loglog(dx, guide, "k:", label="slope 3")
    ax.set_xlabel("dx")
    ax.set_ylabel("L1 error")
    ax.legend(fontsize=8)


def render(spec: PlotSpec) -> str:
    """Draws the figure described by the spec and writes the image file."""
    fig = plt.figure(figsize=(6.0, 4.5))
    try:
        if spec.kind == "triptych":
            _triptych(spec, fig)
        else:
            ax = fig.subplots()
            if spec.kind == "difference-snapshot":
                _difference_snapshot(spec, ax)
            elif spec.kind == "profile":
                _profile(spec, ax)
            else:
                _convergence(spec, ax)
        if spec.title:
            fig.suptitle(spec.title)
        fig.tight_layout()
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output

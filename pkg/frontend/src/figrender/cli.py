"""Command-line entry point: render figures from JSON plot specifications.

A spec file holds one JSON object with the PlotSpec fields; a manifest file
holds a JSON array of such objects.  All diagnostics go to stderr with the
offending file (and line, for parse errors) so failures are actionable from
shell scripts.
"""

from __future__ import annotations

import argparse
import json
import sys

from .render import PlotSpec, RenderError, render


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise RenderError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RenderError(f"{path}:{exc.lineno}: {exc.msg}") from exc


def _spec_from_dict(obj, path: str) -> PlotSpec:
    if not isinstance(obj, dict):
        raise RenderError(f"{path}: plot spec must be a JSON object, "
                          f"got {type(obj).__name__}")
    known = {"kind", "inputs", "output", "title", "labels"}
    extra = set(obj) - known
    if extra:
        raise RenderError(f"{path}: unknown spec fields "
                          f"{', '.join(sorted(extra))}")
    try:
        return PlotSpec(**obj)
    except TypeError as exc:
        raise RenderError(f"{path}: {exc}") from exc


def _collect_specs(args) -> list[PlotSpec]:
    if args.spec:
        return [_spec_from_dict(_load_json(args.spec), args.spec)]
    data = _load_json(args.manifest)
    if not isinstance(data, list) or not data:
        raise RenderError(f"{args.manifest}: manifest must be a non-empty "
                          f"JSON array of plot specs")
    return [_spec_from_dict(obj, args.manifest) for obj in data]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figrender",
        description="Render figures from solver CSV artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one spec or a manifest")
    group = p_render.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="JSON file with a single plot spec")
    group.add_argument("--manifest",
                       help="JSON file with an array of plot specs")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        specs = _collect_specs(args)
        for spec in specs:
            path = render(spec)
            print(f"wrote {path}")
    except RenderError as exc:
        print(f"figrender: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""CSV-driven figure rendering for the shallow-water solver artifacts."""

from .render import PlotSpec, RenderError, render

__all__ = ["PlotSpec", "RenderError", "render"]

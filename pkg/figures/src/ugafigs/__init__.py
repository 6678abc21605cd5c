"""Offline figure rendering for ugalab CSV output."""

from .render import FigureSpec, RenderResult, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "RenderResult", "render", "__version__"]

"""Figure rendering for simulator sweep CSV files."""

from .figures import (FIGURE_KINDS, EmptySelectionError, FigureSpec,
                      RenderInfo, SchemaError, render)

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "EmptySelectionError", "FigureSpec", "RenderInfo",
           "SchemaError", "render", "__version__"]

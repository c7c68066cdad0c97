"""Figure rendering for monitored-honeycomb simulation output tables.

This package consumes the simulator's delimited tables and fit summaries
(CSV/JSON) and renders publication-style figures.  It never imports the
simulator: every scaling function drawn as an overlay is re-implemented
here from closed forms and cross-checked against the numbers embedded in
the fit files.
"""

from .figspec import FigureSpec, KINDS
from .render import render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "KINDS", "render", "__version__"]

"""Publication-style figures from ising-lab CLI output files.

This package never recomputes physics: it reads the sweep CSVs, the
collapse fit JSON/CSV pair, and the shift-fit JSON written by the CLI,
and renders them with matplotlib.  It has no dependency on the solver
package.
"""

from .recipes import FigureRecipe, default_recipes
from .render import render

__all__ = ["FigureRecipe", "default_recipes", "render"]

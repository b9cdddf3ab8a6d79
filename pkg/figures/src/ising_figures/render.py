"""Renderers for the figure recipes.

Output files are deterministic: fixed figure size and fonts, a fixed
svg hash salt, and no embedded timestamps.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .io import (  # noqa: E402
    expand_inputs,
    read_rescaled_csv,
    read_shift_json,
    read_sweep_csv,
    require_column,
)

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 10,
    "font.family": "DejaVu Sans",
    "svg.hashsalt": "ising-figures",
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def _save_metadata(path):
    """Strip the volatile date fields per output format."""
    lower = str(path).lower()
    if lower.endswith(".svg"):
        return {"Date": None}
    if lower.endswith(".pdf"):
        return {"CreationDate": None}
    return None


def _sweep_label(spec, varying):
    parts = []
    if "n" in varying:
        parts.append(f"N={spec.get('n', '?')}")
    if "mu" in varying:
        parts.append(f"mu={spec.get('mu', '?')}")
    return ", ".join(parts) if parts else f"N={spec.get('n', '?')}"


def _varying_fields(specs):
    out = set()
    for key in ("n", "mu", "gamma", "model"):
        if len({json_safe(s.get(key)) for s in specs}) > 1:
            out.add(key)
    return out


def json_safe(value):
    return str(value)


def _draw_curves(ax, recipe, paths):
    loaded = [(p,) + read_sweep_csv(p) for p in paths]
    # legend in size order, not lexical file order
    loaded.sort(key=lambda item: (item[1].get("n", 0), item[1].get("mu", 0.0)))
    varying = _varying_fields([spec for _, spec, _ in loaded])
    for path, spec, cols in loaded:
        h = require_column(cols, "h", path)
        y = require_column(cols, recipe.column, path)
        if recipe.kind == "rescaled_crossing":
            n = spec.get("n")
            if n is None:
                raise ValueError(f"{path}: spec header lacks the chain size "
                                 "needed for rescaling")
            y = y * float(n) ** recipe.rescale_power
        ax.plot(h, y, marker="o", markersize=3,
                label=_sweep_label(spec, varying))
    ax.legend(loc="best")


def _draw_collapse(ax, recipe, paths):
    for path in paths:
        for n, x, y in read_rescaled_csv(path):
            ax.plot(x, y, marker="o", markersize=3, linestyle="-",
                    label=f"N={n}")
    ax.legend(loc="best")


def _draw_loglog_shift(ax, recipe, paths):
    for path in paths:
        payload = read_shift_json(path)
        pts = np.asarray(payload["h_pseudo"], dtype=float)
        sizes, shift = pts[:, 0], pts[:, 1] - 1.0
        ax.loglog(sizes, shift, "o", label="pseudocritical shift")
        lam = payload["exponents"]["lambda_shift"]
        amp = payload["amplitude"]
        grid = np.geomspace(sizes.min(), sizes.max(), 64)
        ax.loglog(grid, amp * grid ** -lam, "-",
                  label=f"fit: {amp:.3g} N^(-{lam:.3g})")
    ax.legend(loc="best")


_DRAWERS = {
    "curves": _draw_curves,
    "rescaled_crossing": _draw_curves,
    "collapse": _draw_collapse,
    "loglog_shift": _draw_loglog_shift,
}


def render(recipe):
    """Render one recipe; returns the output path."""
    paths = expand_inputs(recipe.inputs)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            _DRAWERS[recipe.kind](ax, recipe, paths)
            ax.set_xlabel(recipe.xlabel)
            ax.set_ylabel(recipe.ylabel)
            if recipe.title:
                ax.set_title(recipe.title)
            fig.tight_layout()
            fig.savefig(recipe.output, metadata=_save_metadata(recipe.output))
        finally:
            plt.close(fig)
    return recipe.output

"""Readers for the data files the CLI writes."""

import glob
import json

import numpy as np

SWEEP_COLUMNS = ("h", "sigma_z1", "sigma_x1_me", "sigma_x1_fact",
                 "chi_z1", "min_lambda", "n_subgap")


def expand_inputs(patterns):
    """Sorted list of files matching any of the glob patterns.

    An empty match is an error: a figure silently rendered from nothing
    would hide a broken pipeline upstream.
    """
    paths = []
    for pattern in patterns:
        paths.extend(sorted(glob.glob(str(pattern))))
    if not paths:
        raise ValueError(f"no input files matched {list(patterns)}")
    return paths


def read_sweep_csv(path):
    """Parse one sweep CSV into (spec dict, column dict of arrays)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    spec = {}
    if lines and lines[0].startswith("# spec:"):
        spec = json.loads(lines[0].split(":", 1)[1])
        lines = lines[1:]
    header = tuple(lines[0].split(","))
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    data = np.asarray(rows) if rows else np.zeros((0, len(header)))
    cols = {name: data[:, i] for i, name in enumerate(header)}
    return spec, cols


def require_column(cols, name, path):
    if name not in cols:
        raise ValueError(f"{path}: missing column {name!r}")
    return cols[name]


def read_rescaled_csv(path):
    """Parse a collapse *_rescaled.csv into a list of (N, x, y) curves."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if lines[0] != "x,y,N":
        raise ValueError(f"{path}: missing column 'x,y,N' header")
    data = np.asarray([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    curves = []
    for n in np.unique(data[:, 2]):
        sel = data[:, 2] == n
        curves.append((int(n), data[sel, 0], data[sel, 1]))
    return curves


def read_shift_json(path):
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("exponents", "amplitude", "h_pseudo"):
        if key not in payload:
            raise ValueError(f"{path}: missing column {key!r}")
    return payload

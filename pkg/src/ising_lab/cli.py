"""Command-line front end.

Subcommands: `sweep` (observable CSV per chain size), `closed-form`
(analytic values), `collapse` (exponent search + rescaled data),
`shift` (pseudocritical shift fit), `crossing` (rescaled-curve
crossing), `map2d` (quantum-to-classical mapping), `check` (oracle
suite).  Exit codes: 0 success, 1 numerical failure, 2 bad flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .chain import ChainSpec
from .classical import (
    ClassicalLatticeSpec,
    brute_force_partition,
    quantum_to_classical,
    row_transfer_matrix,
)
from . import closed_forms as cf
from .fss import (
    crossing_point,
    fit_shift_exponent,
    locate_pseudocritical,
    optimize_exponents,
    peak_scaling_fit,
    rescale_curves,
    series_curve,
)
from .observables import ObservableSeries, energy_scale, sweep
from .selfcheck import run_checks
from .solver import classify_modes, solve_spec


def parse_grid(text: str, min_count: int = 2) -> np.ndarray:
    """Parse `min:max:count` into an inclusive ascending grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be min:max:count, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < min_count:
        raise ValueError(f"grid count must be >= {min_count}")
    if hi <= lo:
        raise ValueError("grid max must exceed min")
    return np.linspace(lo, hi, count)


def _parse_n_list(text: str):
    return [int(x) for x in text.split(",") if x]


def _spec_from_args(args, n: int, h: float = 1.0) -> ChainSpec:
    return ChainSpec(
        model=args.model,
        n_sites=n,
        bulk_field=h,
        impurity_scale=args.mu,
        bulk_anisotropy=args.gamma,
        impurity_anisotropy=args.gamma1,
        mirror=getattr(args, "mirror", False),
    )


def _add_spec_flags(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=["ising", "xy"], default="ising")
    p.add_argument("--mu", type=float, default=1.0, help="impurity field scale")
    p.add_argument("--gamma", type=float, default=1.0, help="bulk anisotropy (XY)")
    p.add_argument("--gamma1", type=float, default=1.0, help="first-bond anisotropy (XY)")


def _sweep_tag(args, n: int) -> str:
    return f"{args.model}_N{n}_mu{args.mu:g}_gamma{args.gamma:g}"


def _run_sweeps(args, h_grid):
    """One ObservableSeries per N, optionally loaded from --inputs CSVs."""
    out = {}
    inputs = getattr(args, "inputs", None)
    if inputs:
        for path in inputs:
            series = ObservableSeries.from_csv(path)
            if series.spec_base is None:
                raise ValueError(f"{path}: missing spec header; cannot infer N")
            out[series.spec_base.n_sites] = series
        return out
    for n in _parse_n_list(args.n):
        out[n] = sweep(_spec_from_args(args, n), h_grid,
                       max_workers=getattr(args, "workers", None))
    return out


def cmd_sweep(args) -> int:
    h_grid = parse_grid(args.h)
    os.makedirs(args.out, exist_ok=True)
    for n in _parse_n_list(args.n):
        spec = _spec_from_args(args, n)
        series = sweep(spec, h_grid, max_workers=args.workers)
        path = os.path.join(args.out, f"sweep_{_sweep_tag(args, n)}.csv")
        series.write_csv(path)
        print(path)
        if args.dump_modes:
            mode_path = os.path.join(args.out, f"modes_{_sweep_tag(args, n)}.csv")
            with open(mode_path, "w") as fh:
                fh.write("h,q,lambda,class\n")
                for h in h_grid:
                    ms = solve_spec(spec.with_field(h))
                    cls = classify_modes(ms, h, scale=energy_scale(spec))
                    for q, (lam, c) in enumerate(zip(ms.energies, cls)):
                        fh.write("%.12e,%d,%.12e,%s\n" % (h, q, lam, c))
            print(mode_path)
    return 0


CLOSED_FORMS = {
    "lambda1": lambda a: cf.discrete_mode_energies(a.h, a.mu, a.n)[0],
    "lambda2": lambda a: cf.discrete_mode_energies(a.h, a.mu, a.n)[1],
    "sigma-z1-thermo": lambda a: cf.sigma_z1_thermo(a.h, a.mu),
    "sigma-z1-mu0": lambda a: cf.sigma_z1_mu0_finite_n(a.h, a.n),
    "chi-z1-mu0": lambda a: cf.chi_z1_mu0_finite_n(a.h, a.n),
    "chi-z1-thermo": lambda a: cf.chi_z1_thermo(a.h),
    "chi-z1-peak-expansion": lambda a: cf.chi_z1_peak_expansion(a.h, a.n),
    "sigma-x1-thermo": lambda a: cf.sigma_x1_thermo(a.h, a.mu),
    "sigma-x1-near-hc": lambda a: cf.sigma_x1_near_hc(a.h, a.mu),
    "sigma-x1-finite-n": lambda a: cf.sigma_x1_finite_n(a.h, a.mu, a.n),
    "region-flags": lambda a: cf.region_flags(a.h, a.mu).__dict__,
    "xi": lambda a: cf.two_length_scales(a.h, a.mu).__dict__,
}


def cmd_closed_form(args) -> int:
    value = CLOSED_FORMS[args.name](args)
    print(json.dumps({"name": args.name, "h": args.h, "mu": args.mu,
                      "n": args.n, "value": value}))
    return 0


def _named_exponents(observable: str, fit) -> dict:
    """Translate the generic (e_scale, nu) into conventional exponent names."""
    e, e_err = fit.exponent_estimates["e_scale"]
    nu, nu_err = fit.exponent_estimates["nu"]
    names = {"nu": nu, "e_scale": e}
    errs = {"nu": nu_err, "e_scale": e_err}
    if observable == "chi_z1":
        names["alpha_over_nu"] = -e  # chi ~ N^(alpha/nu), rescaled by N^(-alpha/nu)
        errs["alpha_over_nu"] = e_err
    else:
        names["beta_tilde_over_nu"] = e  # O ~ N^(-beta/nu), rescaled by N^(+beta/nu)
        errs["beta_tilde_over_nu"] = e_err
    return {"exponents": names, "stderr": errs}


def cmd_collapse(args) -> int:
    h_grid = parse_grid(args.h) if args.h else None
    series_by_n = _run_sweeps(args, h_grid)
    curves = [series_curve(n, s, args.observable) for n, s in sorted(series_by_n.items())]

    h_pseudo = []
    if args.href == "per-n":
        h_ref = {}
        for n, s in sorted(series_by_n.items()):
            hc, _ = locate_pseudocritical(s, observable=args.observable)
            h_ref[n] = hc
            h_pseudo.append([n, hc])
    else:
        h_ref = 1.0

    guess = (args.e_guess, args.nu_guess)
    fit = optimize_exponents(curves, initial=guess, h_ref=h_ref, seed=args.seed)
    payload = _named_exponents(args.observable, fit)
    payload["h_pseudo"] = h_pseudo
    payload["cost"] = fit.collapse_cost

    prefix = args.out
    with open(prefix + "_fit.json", "w") as fh:
        json.dump(payload, fh, indent=2)
    e, _ = fit.exponent_estimates["e_scale"]
    nu, _ = fit.exponent_estimates["nu"]
    with open(prefix + "_rescaled.csv", "w") as fh:
        fh.write("x,y,N\n")
        for n, x, y in rescale_curves(curves, e, nu, h_ref):
            for xv, yv in zip(x, y):
                fh.write("%.12e,%.12e,%d\n" % (xv, yv, n))
    print(prefix + "_fit.json")
    print(prefix + "_rescaled.csv")
    return 0


def _auto_peak_grid(n: int) -> np.ndarray:
    """Bracketing grid around the expected susceptibility peak 1 + 2/(3N)."""
    center = 1.0 + 2.0 / (3.0 * n)
    half = max(4.0 / n, 0.004)
    return np.linspace(center - half, center + half, 9)


def cmd_shift(args) -> int:
    ns = _parse_n_list(args.n)
    points, peaks = [], []
    for n in ns:
        spec = _spec_from_args(args, n)
        grid = parse_grid(args.h) if args.h else _auto_peak_grid(n)
        series = sweep(spec, grid, max_workers=args.workers)
        hc, peak = locate_pseudocritical(series, observable="chi_z1")
        points.append((n, hc))
        peaks.append((n, peak))
    lam, amp, lam_err = fit_shift_exponent(points)
    alpha_nu, alpha_err = peak_scaling_fit(peaks)
    payload = {
        "exponents": {"lambda_shift": lam, "alpha_over_nu": alpha_nu},
        "stderr": {"lambda_shift": lam_err, "alpha_over_nu": alpha_err},
        "amplitude": amp,
        "h_pseudo": [[n, hc] for n, hc in points],
        "peaks": [[n, p] for n, p in peaks],
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(args.out)
    else:
        print(text)
    return 0


def cmd_crossing(args) -> int:
    h_grid = parse_grid(args.h)
    series_by_n = _run_sweeps(args, h_grid)
    curves = [series_curve(n, s, args.observable) for n, s in sorted(series_by_n.items())]
    res = crossing_point(curves, args.ratio)
    print(json.dumps({"h_cross": res.h_cross, "dispersion": res.dispersion,
                      "degenerate": res.degenerate,
                      "skipped_pairs": [list(p) for p in res.skipped_pairs]}))
    return 0


def cmd_map2d(args) -> int:
    with open(args.spec) as fh:
        spec = ChainSpec.from_json(fh.read())
    lat = quantum_to_classical(spec, beta=args.beta, m_y=args.my)
    text = lat.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(args.out)
    else:
        print(text)
    if args.verify:
        mx = min(lat.m_x, 3)
        small = ClassicalLatticeSpec(m_x=mx, m_y=4, beta=lat.beta,
                                     k_x=np.asarray(lat.k_x)[:mx - 1],
                                     k_y=np.asarray(lat.k_y)[:mx])
        t = row_transfer_matrix(small)
        z_tm = float(np.trace(np.linalg.matrix_power(t, 4)))
        z_bf = brute_force_partition(small)
        rel = abs(z_tm - z_bf) / z_bf
        print(f"partition identity on {mx}x4 sublattice: relative error {rel:.3e}")
        if rel > 1e-10:
            raise RuntimeError("partition-function identity violated")
    return 0


def cmd_check(args) -> int:
    return 0 if run_checks() else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ising-lab",
                                description="Boundary-impurity spin-chain laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="observable sweep over an h-grid")
    _add_spec_flags(sp)
    sp.add_argument("--mirror", action="store_true")
    sp.add_argument("--n", required=True, help="comma-separated chain sizes")
    sp.add_argument("--h", required=True, help="grid min:max:count")
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--dump-modes", action="store_true")
    sp.set_defaults(func=cmd_sweep)

    cp = sub.add_parser("closed-form", help="evaluate an analytic expression")
    cp.add_argument("name", choices=sorted(CLOSED_FORMS))
    cp.add_argument("--h", type=float, required=True)
    cp.add_argument("--mu", type=float, default=1.0)
    cp.add_argument("--n", type=int, default=100)
    cp.set_defaults(func=cmd_closed_form)

    co = sub.add_parser("collapse", help="exponent search by data collapse")
    _add_spec_flags(co)
    co.add_argument("--observable", default="sigma_z1",
                    choices=["sigma_z1", "sigma_x1_me", "sigma_x1_fact", "chi_z1"])
    co.add_argument("--n", help="comma-separated chain sizes")
    co.add_argument("--h", help="grid min:max:count")
    co.add_argument("--inputs", nargs="+", help="existing sweep CSVs instead of recomputing")
    co.add_argument("--href", choices=["hc", "per-n"], default="hc")
    co.add_argument("--e-guess", type=float, default=0.5)
    co.add_argument("--nu-guess", type=float, default=1.0)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--workers", type=int, default=None)
    co.add_argument("--out", default="collapse", help="output file prefix")
    co.set_defaults(func=cmd_collapse)

    sh = sub.add_parser("shift", help="pseudocritical shift-exponent fit")
    _add_spec_flags(sh)
    sh.add_argument("--n", required=True, help="comma-separated chain sizes")
    sh.add_argument("--h", help="optional grid min:max:count (default: auto bracket)")
    sh.add_argument("--workers", type=int, default=None)
    sh.add_argument("--out", help="output JSON path (default: stdout)")
    sh.set_defaults(func=cmd_shift)

    cr = sub.add_parser("crossing", help="rescaled-curve crossing point")
    _add_spec_flags(cr)
    cr.add_argument("--observable", default="sigma_z1")
    cr.add_argument("--ratio", type=float, default=0.5)
    cr.add_argument("--n", help="comma-separated chain sizes")
    cr.add_argument("--h", required=True, help="grid min:max:count")
    cr.add_argument("--inputs", nargs="+")
    cr.add_argument("--workers", type=int, default=None)
    cr.set_defaults(func=cmd_crossing)

    mp = sub.add_parser("map2d", help="quantum-to-classical parameter map")
    mp.add_argument("--spec", required=True, help="ChainSpec JSON file")
    mp.add_argument("--beta", type=float, required=True)
    mp.add_argument("--my", type=int, default=1)
    mp.add_argument("--out", help="output JSON path")
    mp.add_argument("--verify", action="store_true")
    mp.set_defaults(func=cmd_map2d)

    ck = sub.add_parser("check", help="run the oracle suite")
    ck.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

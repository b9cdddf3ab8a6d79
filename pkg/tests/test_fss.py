import numpy as np
import pytest

from ising_lab.chain import ChainSpec
from ising_lab.fss import (
    collapse_cost,
    crossing_point,
    fit_shift_exponent,
    locate_pseudocritical,
    optimize_exponents,
    peak_scaling_fit,
    series_curve,
)
from ising_lab.observables import ObservableSeries, sweep


def synthetic_series(h, chi):
    return ObservableSeries(
        spec_base=None, h_values=np.asarray(h, dtype=float),
        sigma_z1=np.zeros(len(h)), sigma_x1_me=np.zeros(len(h)),
        sigma_x1_fact=np.zeros(len(h)), chi_z1=np.asarray(chi, dtype=float),
        min_lambda=np.zeros(len(h)), n_subgap=np.zeros(len(h), dtype=int))


def test_locate_parabola_vertex_exact():
    h = np.linspace(0.9, 1.1, 21)
    series = synthetic_series(h, 5.0 - (h - 1.013) ** 2)
    hc, peak = locate_pseudocritical(series)
    assert hc == pytest.approx(1.013, abs=1e-9)
    assert peak == pytest.approx(5.0, abs=1e-9)


def test_locate_boundary_maximum_is_error():
    h = np.linspace(0.9, 1.1, 11)
    series = synthetic_series(h, h)  # increasing, max at boundary
    with pytest.raises(ValueError):
        locate_pseudocritical(series)


def test_locate_real_peak_n300():
    spec = ChainSpec(n_sites=300, bulk_field=1.0, impurity_scale=0.0)
    grid = np.linspace(0.996, 1.008, 9)
    series = sweep(spec, grid)
    hc, _ = locate_pseudocritical(series)
    assert hc == pytest.approx(1.0 + 2.0 / 900.0, abs=2e-4)


def test_locate_grid_refinement_stability():
    spec = ChainSpec(n_sites=100, bulk_field=1.0, impurity_scale=0.0)
    coarse = sweep(spec, np.linspace(0.99, 1.03, 9))
    fine = sweep(spec, np.linspace(0.99, 1.03, 17))
    hc1, _ = locate_pseudocritical(coarse)
    hc2, _ = locate_pseudocritical(fine)
    assert abs(hc1 - hc2) < 1e-5


def test_shift_fit_exact_power_law():
    points = [(n, 1.0 + 0.6667 / n) for n in (50, 100, 200, 400, 800)]
    lam, amp, err = fit_shift_exponent(points)
    assert lam == pytest.approx(1.0, abs=1e-6)
    assert amp == pytest.approx(0.6667, rel=1e-6)
    assert err < 1e-6


def test_shift_fit_excludes_zero_shift():
    points = [(50, 1.01), (100, 1.005), (200, 1.0025), (400, 1.0)]
    with pytest.warns(UserWarning):
        lam, _, _ = fit_shift_exponent(points)
    assert lam == pytest.approx(1.0, abs=1e-9)


def test_peak_fit_exact_power_law():
    points = [(n, 0.25 * n ** 0.5) for n in (50, 100, 200, 400)]
    exponent, err = peak_scaling_fit(points)
    assert exponent == pytest.approx(0.5, abs=1e-12)


def test_crossing_identical_curves_degenerate():
    h = np.linspace(0.9, 1.1, 21)
    y = np.exp(-(h - 1.0) ** 2)
    res = crossing_point([(100, h, y), (100, h, y.copy())], ratio=0.5)
    assert res.degenerate


def test_crossing_synthetic_scaling_family():
    # O(h, N) = N^(-1/2) f(N (h - 1)) crosses exactly at h = 1 for ratio 1/2
    h = np.linspace(0.95, 1.05, 201)
    curves = []
    for n in (64, 128, 256):
        y = n ** -0.5 * (1.0 - np.tanh(n * (h - 1.0)))
        curves.append((n, h, y))
    res = crossing_point(curves, ratio=0.5)
    assert res.h_cross == pytest.approx(1.0, abs=1e-6)
    assert not res.degenerate


def test_crossing_skips_pairs_without_sign_change():
    h = np.linspace(0.9, 1.1, 21)
    res = crossing_point(
        [(10, h, np.full_like(h, 2.0)), (20, h, np.full_like(h, 1.0)),
         (40, h, 5.0 * (h - 1.0) + 1.0)], ratio=0.0)
    assert len(res.skipped_pairs) >= 1


def test_collapse_cost_perfect_synthetic_data():
    curves = []
    for n in (50, 100, 200):
        x = np.linspace(-2.0, 2.0, 101)
        h = 1.0 + x / n
        y = n ** -0.5 * np.exp(-x ** 2)
        curves.append((n, h, y))
    assert collapse_cost(curves, 0.5, 1.0, 1.0) < 1e-20


def test_collapse_cost_discriminates_wrong_exponents():
    grid = np.linspace(0.95, 1.05, 21)
    curves = []
    for n in (32, 64, 128):
        series = sweep(ChainSpec(n_sites=n, impurity_scale=0.0), grid)
        curves.append(series_curve(n, series, "sigma_z1"))
    good = collapse_cost(curves, 0.5, 1.0, 1.0)
    assert collapse_cost(curves, 0.5, 0.5, 1.0) > 10.0 * good
    assert collapse_cost(curves, 0.25, 1.0, 1.0) > 10.0 * good


def test_collapse_cost_empty_overlap_is_error():
    c1 = (10, np.linspace(0.0, 0.4, 5), np.ones(5))
    c2 = (1000, np.linspace(2.0, 2.4, 5), np.ones(5))
    with pytest.raises(ValueError):
        collapse_cost([c1, c2], 0.0, 1.0, 1.0)


def test_optimizer_recovers_synthetic_exponents():
    curves = []
    for n in (50, 100, 200, 400):
        x = np.linspace(-3.0, 3.0, 151)
        h = 1.0 + x / n
        y = n ** -0.5 / np.cosh(x)
        curves.append((n, h, y))
    fit = optimize_exponents(curves, initial=(0.4, 1.2), h_ref=1.0, seed=1)
    e, _ = fit.exponent_estimates["e_scale"]
    nu, _ = fit.exponent_estimates["nu"]
    assert e == pytest.approx(0.5, abs=1e-3)
    assert nu == pytest.approx(1.0, abs=1e-3)
    assert fit.collapse_cost < 1e-8


def test_optimizer_is_reproducible():
    curves = []
    for n in (50, 100, 200):
        x = np.linspace(-2.0, 2.0, 51)
        y = n ** -0.5 * np.exp(-np.abs(x)) * (1.0 + 0.01 * np.sin(5 * x))
        curves.append((n, 1.0 + x / n, y))
    f1 = optimize_exponents(curves, seed=3)
    f2 = optimize_exponents(curves, seed=3)
    assert f1.exponent_estimates == f2.exponent_estimates


def _sigma_z1_curves(sizes, grid):
    from ising_lab.observables import transverse_magnetization
    from ising_lab.solver import solve_spec
    curves = []
    for n in sizes:
        y = [transverse_magnetization(
            solve_spec(ChainSpec(n_sites=n, bulk_field=h, impurity_scale=0.0)), 1)
            for h in grid]
        curves.append((n, grid, np.array(y)))
    return curves


def test_crossing_wrong_ratio_blows_up_dispersion():
    grid = np.linspace(0.95, 1.05, 41)
    curves = _sigma_z1_curves((64, 128, 256), grid)
    good = crossing_point(curves, ratio=0.5)
    bad = crossing_point(curves, ratio=0.3)
    assert bad.dispersion > 5.0 * max(good.dispersion, 1e-12)


def test_bulk_susceptibility_diverges_logarithmically():
    # the mid-chain (bulk) susceptibility peak grows like log N, so a
    # log fit must beat a power-law fit by a wide margin
    from ising_lab.observables import transverse_magnetization
    from ising_lab.solver import solve_spec

    def chi_bulk(n, h=1.0, d=1e-5):
        def sz(hh):
            ms = solve_spec(ChainSpec(n_sites=n, bulk_field=hh, impurity_scale=1.0))
            return transverse_magnetization(ms, n // 2)
        return (sz(h + d) - sz(h - d)) / (2.0 * d)

    sizes = np.array([32, 64, 128, 256])
    vals = np.array([chi_bulk(int(n)) for n in sizes])
    design = np.vstack([np.log(sizes), np.ones(len(sizes))]).T
    power_coef = np.linalg.lstsq(design, np.log(vals), rcond=None)[0]
    log_coef = np.linalg.lstsq(design, vals, rcond=None)[0]
    rms_power = np.sqrt(np.mean((vals - np.exp(design @ power_coef)) ** 2))
    rms_log = np.sqrt(np.mean((vals - design @ log_coef) ** 2))
    assert rms_log < 0.05 * rms_power


def test_fit_requires_positive_inputs():
    with pytest.raises(ValueError):
        peak_scaling_fit([(10, 1.0), (20, -2.0), (40, 4.0)])
    with pytest.raises(ValueError):
        fit_shift_exponent([(10, 1.1), (10, 1.05), (20, 1.02)])

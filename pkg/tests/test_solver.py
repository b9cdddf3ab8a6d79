import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab.chain import ChainSpec, build_quadratic_form
from ising_lab.closed_forms import discrete_mode_energies
from ising_lab.solver import (
    SUBGAP,
    SUPRAGAP,
    brute_force_ed,
    classify_modes,
    correlation_kernel,
    many_body_spectrum,
    solve,
    solve_spec,
)


def random_spec(rng, n=None, mu_range=(0.1, 2.5)):
    """Random chain away from the exactly degenerate mu = 0 line."""
    return ChainSpec(
        n_sites=n or int(rng.integers(3, 9)),
        bulk_field=float(rng.uniform(0.2, 2.5)),
        impurity_scale=float(rng.uniform(*mu_range)),
        mirror=bool(rng.integers(0, 2)),
    )


def test_mode_set_invariants_random_specs():
    rng = np.random.default_rng(11)
    for _ in range(10):
        spec = random_spec(rng, n=int(rng.integers(4, 40)))
        qf = build_quadratic_form(spec)
        ms = solve(qf)
        n = spec.n_sites
        assert np.all(ms.energies >= 0)
        assert np.all(np.diff(ms.energies) >= 0)
        assert np.allclose(ms.psi @ ms.psi.T, np.eye(n), atol=1e-10)
        assert np.allclose(ms.phi @ ms.phi.T, np.eye(n), atol=1e-10)
        norm = np.linalg.norm(qf.a_matrix)
        z = qf.a_matrix + qf.b_matrix
        zt = qf.a_matrix - qf.b_matrix
        for q in range(n):
            if ms.energies[q] <= 1e-12 * ms.energies[-1]:
                continue
            assert np.allclose(ms.psi[q] @ z, ms.energies[q] * ms.phi[q], atol=1e-9 * norm)
            assert np.allclose(ms.phi[q] @ zt, ms.energies[q] * ms.psi[q], atol=1e-9 * norm)


def test_singular_value_reconstruction():
    rng = np.random.default_rng(4)
    for _ in range(5):
        qf = build_quadratic_form(random_spec(rng, n=25))
        ms = solve(qf)
        z = qf.a_matrix + qf.b_matrix
        recon = ms.psi.T @ np.diag(ms.energies) @ ms.phi
        assert np.linalg.norm(recon - z) <= 1e-9 * np.linalg.norm(z)


def test_spectrum_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(20):
        spec = random_spec(rng, n=8)
        ms = solve_spec(spec)
        ed = brute_force_ed(spec)
        assert np.max(np.abs(many_body_spectrum(ms) - ed.spectrum)) < 1e-9


def test_two_site_hand_spectrum():
    ed = brute_force_ed(ChainSpec(n_sites=2, bulk_field=1.0, impurity_scale=1.0))
    s5 = np.sqrt(5.0)
    assert np.allclose(ed.spectrum, [-s5, -1.0, 1.0, s5], atol=1e-12)


def test_parity_degeneracy_at_mu_zero():
    for n, h in [(6, 0.7), (8, 1.3), (10, 1.0)]:
        ed = brute_force_ed(ChainSpec(n_sites=n, bulk_field=h, impurity_scale=0.0))
        splits = ed.spectrum[1::2] - ed.spectrum[0::2]
        assert np.max(np.abs(splits)) < 1e-12


def test_zero_mode_counts():
    ms = solve_spec(ChainSpec(n_sites=50, bulk_field=2.0, impurity_scale=0.0))
    assert np.sum(ms.energies < 1e-12) == 1
    ms = solve_spec(ChainSpec(n_sites=50, bulk_field=2.0, impurity_scale=1.0))
    assert np.sum(ms.energies < 1e-12) == 0


def test_homogeneous_band_limits():
    ms = solve_spec(ChainSpec(n_sites=200, bulk_field=0.5, impurity_scale=1.0))
    # deepest mode is the exponentially small edge mode
    assert ms.energies[0] < 1e-12
    assert ms.energies[1] > 1.0 - 0.1
    assert ms.energies[-1] < 3.0 + 0.1


def test_supragap_mode_value():
    ms = solve_spec(ChainSpec(n_sites=100, bulk_field=2.0, impurity_scale=3.0))
    _, lam2 = discrete_mode_energies(2.0, 3.0, 100)
    assert lam2 == pytest.approx(6.0 * np.sqrt(33.0 / 8.0), rel=1e-12)
    assert ms.energies[-1] == pytest.approx(lam2, rel=1e-6)
    cls = classify_modes(ms, 2.0)
    assert cls.count(SUPRAGAP) == 1


def test_classification_examples():
    ms = solve_spec(ChainSpec(n_sites=400, bulk_field=0.5, impurity_scale=0.5))
    assert classify_modes(ms, 0.5).count(SUBGAP) == 1
    ms = solve_spec(ChainSpec(n_sites=400, bulk_field=2.0, impurity_scale=0.3))
    assert classify_modes(ms, 2.0).count(SUBGAP) == 1
    ms = solve_spec(ChainSpec(n_sites=400, bulk_field=2.0, impurity_scale=1.0))
    cls = classify_modes(ms, 2.0)
    assert cls.count(SUBGAP) == 0 and cls.count(SUPRAGAP) == 0


def test_kernel_limits():
    ms = solve_spec(ChainSpec(n_sites=100, bulk_field=50.0, impurity_scale=1.0))
    g = correlation_kernel(ms).g_matrix
    assert np.all(np.abs(np.diag(g)[10:90] + 1.0) < 1e-3)
    # zero field: perfect x-order, |G_{n,n+1}| -> 1 and the other
    # off-diagonal vanishes; the +1 sign follows from the pairing rule
    # psi_q (A+B) = Lambda_q phi_q with the first-component convention
    ms = solve_spec(ChainSpec(n_sites=100, bulk_field=0.0, impurity_scale=1.0))
    g = correlation_kernel(ms).g_matrix
    sup = g[np.arange(10, 90), np.arange(11, 91)]
    sub = g[np.arange(11, 91), np.arange(10, 90)]
    assert np.all(np.abs(sup - 1.0) < 1e-6)
    assert np.all(np.abs(sub) < 1e-6)


def test_kernel_against_brute_force():
    rng = np.random.default_rng(9)
    for _ in range(5):
        spec = random_spec(rng, n=8)
        ms = solve_spec(spec)
        g = correlation_kernel(ms).g_matrix
        ed = brute_force_ed(spec)
        assert np.max(np.abs(np.diag(g) + ed.sigma_z)) < 1e-10
        assert np.max(np.abs(g)) <= 1.0 + 1e-9
        evals = np.linalg.eigvalsh(g @ g.T)
        assert np.max(evals) <= 1.0 + 1e-9


def test_ground_energy_free_fermion_vs_ed():
    spec = ChainSpec(n_sites=9, bulk_field=1.7, impurity_scale=0.6)
    ms = solve_spec(spec)
    ed = brute_force_ed(spec)
    assert ms.ground_energy == pytest.approx(ed.spectrum[0], abs=1e-10)


def test_solver_rejects_bad_input():
    qf = build_quadratic_form(ChainSpec(n_sites=4))
    bad = qf.a_matrix.copy()
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        solve(type(qf)(a_matrix=bad, b_matrix=qf.b_matrix, scalar_offset=0.0))
    with pytest.raises(ValueError):
        brute_force_ed(ChainSpec(n_sites=13))


def test_solve_is_deterministic():
    spec = ChainSpec(n_sites=30, bulk_field=1.1, impurity_scale=0.0)
    ms1, ms2 = solve_spec(spec), solve_spec(spec)
    assert np.array_equal(ms1.psi, ms2.psi)
    assert np.array_equal(ms1.phi, ms2.phi)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=3, max_value=8),
    h=st.floats(min_value=0.1, max_value=2.5, allow_nan=False),
    mu=st.floats(min_value=0.1, max_value=2.5, allow_nan=False),
)
def test_spectrum_reconstruction_property(n, h, mu):
    spec = ChainSpec(n_sites=n, bulk_field=h, impurity_scale=mu)
    ms = solve_spec(spec)
    ed = brute_force_ed(spec)
    assert np.max(np.abs(many_body_spectrum(ms) - ed.spectrum)) < 1e-9

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_lab.chain import ChainSpec, field_profile
from ising_lab.classical import (
    ClassicalLatticeSpec,
    brute_force_partition,
    classical_to_quantum,
    quantum_to_classical,
    row_transfer_matrix,
    transfer_gap_error,
)


def test_mapping_example_value():
    spec = ChainSpec(n_sites=3, bulk_field=1.0, impurity_scale=1.0)
    lat = quantum_to_classical(spec, beta=1.0)
    assert lat.k_y[1] == pytest.approx(math.atanh(math.exp(-2.0)), rel=1e-12)
    assert lat.k_y[1] == pytest.approx(0.13617, abs=1e-5)
    assert np.allclose(lat.k_x, 1.0)


def test_mapping_locked_column_at_mu_zero():
    spec = ChainSpec(n_sites=4, bulk_field=1.0, impurity_scale=0.0)
    lat = quantum_to_classical(spec, beta=2.0)
    assert math.isinf(lat.k_y[0])
    assert np.all(np.isfinite(lat.k_y[1:]))


def test_round_trip_random_specs():
    rng = np.random.default_rng(17)
    for _ in range(10):
        spec = ChainSpec(n_sites=int(rng.integers(2, 9)),
                         bulk_field=float(rng.uniform(0.2, 2.0)),
                         impurity_scale=float(rng.uniform(0.05, 2.0)))
        beta = float(rng.uniform(0.5, 3.0))
        j_n, h_n = classical_to_quantum(quantum_to_classical(spec, beta))
        assert np.max(np.abs(j_n - 1.0)) < 1e-12
        assert np.max(np.abs(h_n - field_profile(spec))) < 1e-12


def test_inverse_map_example():
    k = math.atanh(math.exp(-2.0))
    lat = ClassicalLatticeSpec(m_x=2, m_y=1, beta=1.0,
                               k_x=np.array([1.0]), k_y=np.array([k, k]))
    _, h_n = classical_to_quantum(lat)
    assert h_n[0] == pytest.approx(1.0, abs=1e-12)


def test_single_column_transfer_matrix_is_1d_ising():
    a = 0.7
    lat = ClassicalLatticeSpec(m_x=1, m_y=6, beta=1.0,
                               k_x=np.zeros(0), k_y=np.array([a]))
    t = row_transfer_matrix(lat)
    lam_p, lam_m = 2.0 * math.cosh(a), 2.0 * math.sinh(a)
    z_tm = float(np.trace(np.linalg.matrix_power(t, 6)))
    assert z_tm == pytest.approx(lam_p ** 6 + lam_m ** 6, rel=1e-12)
    assert z_tm == pytest.approx(brute_force_partition(lat), rel=1e-12)


def test_partition_identity_uniform():
    lat = ClassicalLatticeSpec(m_x=3, m_y=4, beta=1.0,
                               k_x=np.full(2, 0.4), k_y=np.full(3, 0.4))
    t = row_transfer_matrix(lat)
    z_tm = float(np.trace(np.linalg.matrix_power(t, 4)))
    assert z_tm == pytest.approx(brute_force_partition(lat), rel=1e-10)


def test_partition_identity_random_instances():
    rng = np.random.default_rng(5)
    for _ in range(6):
        mx = int(rng.integers(2, 7))
        my = int(rng.integers(1, 5))
        if mx * my > 24:
            my = 24 // mx
        lat = ClassicalLatticeSpec(m_x=mx, m_y=my, beta=float(rng.uniform(0.5, 2.0)),
                                   k_x=rng.uniform(0.1, 1.0, mx - 1),
                                   k_y=rng.uniform(0.1, 1.0, mx))
        t = row_transfer_matrix(lat)
        z_tm = float(np.trace(np.linalg.matrix_power(t, my)))
        assert z_tm == pytest.approx(brute_force_partition(lat), rel=1e-10)


def test_partition_identity_with_locked_column():
    lat = ClassicalLatticeSpec(m_x=3, m_y=4, beta=1.0,
                               k_x=np.array([0.5, 0.3]),
                               k_y=np.array([math.inf, 0.4, 0.6]))
    t = row_transfer_matrix(lat)
    z_tm = float(np.trace(np.linalg.matrix_power(t, 4)))
    assert z_tm == pytest.approx(brute_force_partition(lat), rel=1e-10)


def test_free_spins_partition():
    lat = ClassicalLatticeSpec(m_x=2, m_y=2, beta=1.0,
                               k_x=np.array([1e-300]), k_y=np.array([1e-300, 1e-300]))
    assert brute_force_partition(lat) == pytest.approx(16.0, rel=1e-10)


def test_lattice_json_round_trip():
    lat = ClassicalLatticeSpec(m_x=3, m_y=2, beta=1.5,
                               k_x=np.array([0.5, 0.3]),
                               k_y=np.array([math.inf, 0.4, 0.6]))
    back = ClassicalLatticeSpec.from_dict(lat.to_dict())
    assert back.m_x == lat.m_x and back.beta == lat.beta
    assert math.isinf(back.k_y[0])
    assert np.allclose(back.k_x, lat.k_x)


def test_gap_correspondence_improves_with_beta():
    spec = ChainSpec(n_sites=8, bulk_field=1.2, impurity_scale=1.0)
    err2 = transfer_gap_error(spec, beta=2.0)
    err5 = transfer_gap_error(spec, beta=5.0)
    assert err5 < err2
    assert err5 < 0.10


def test_rejects_invalid_lattices():
    with pytest.raises(ValueError):
        ClassicalLatticeSpec(m_x=2, m_y=0, beta=1.0,
                             k_x=np.array([1.0]), k_y=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        ClassicalLatticeSpec(m_x=2, m_y=1, beta=1.0,
                             k_x=np.array([-1.0]), k_y=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        quantum_to_classical(ChainSpec(n_sites=3), beta=0.0)


@settings(max_examples=40, deadline=None)
@given(h1=st.floats(min_value=0.01, max_value=5.0),
       h2=st.floats(min_value=0.01, max_value=5.0),
       beta=st.floats(min_value=0.1, max_value=5.0))
def test_vertical_coupling_decreases_with_field(h1, h2, beta):
    lo, hi = sorted((h1, h2))
    k_lo = math.atanh(math.exp(-2.0 * lo)) / beta
    k_hi = math.atanh(math.exp(-2.0 * hi)) / beta
    assert (k_hi < k_lo) or (lo == hi)

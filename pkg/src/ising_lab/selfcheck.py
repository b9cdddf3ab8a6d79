"""Fast oracle suite behind the `check` CLI subcommand.

Each check cross-validates one layer of the pipeline against an
independent reference: brute-force spin-basis diagonalization, the
closed-form discrete-mode expressions, the thermodynamic-limit
quadrature, and the 2D partition-function identity.
"""

from __future__ import annotations

import math

import numpy as np

from .chain import ChainSpec, build_quadratic_form
from .classical import (
    ClassicalLatticeSpec,
    brute_force_partition,
    classical_to_quantum,
    quantum_to_classical,
    row_transfer_matrix,
)
from .closed_forms import (
    discrete_mode_energies,
    sigma_z1_mu0_finite_n,
    sigma_z1_thermo,
    sigma_x1_thermo,
)
from .observables import transverse_magnetization
from .solver import brute_force_ed, correlation_kernel, many_body_spectrum, solve, solve_spec


def _check_quadratic_form():
    qf = build_quadratic_form(ChainSpec(n_sites=2, bulk_field=1.0, impurity_scale=0.0))
    ok = (np.allclose(qf.a_matrix, [[0, -1], [-1, 2]])
          and np.allclose(qf.b_matrix, [[0, -1], [1, 0]])
          and qf.scalar_offset == -1.0)
    return ok, "N=2 transcription"


def _check_spectrum_reconstruction():
    worst = 0.0
    rng = np.random.default_rng(7)
    for _ in range(3):
        spec = ChainSpec(n_sites=8, bulk_field=rng.uniform(0.2, 2.5),
                         impurity_scale=rng.uniform(0.1, 2.5))
        ms = solve_spec(spec)
        ed = brute_force_ed(spec)
        worst = max(worst, float(np.max(np.abs(many_body_spectrum(ms) - ed.spectrum))))
    return worst < 1e-9, f"max level error {worst:.2e}"


def _check_degeneracy_mu0():
    ed = brute_force_ed(ChainSpec(n_sites=8, bulk_field=1.3, impurity_scale=0.0))
    splits = ed.spectrum[1::2] - ed.spectrum[0::2]
    worst = float(np.max(np.abs(splits)))
    return worst < 1e-12, f"max pair split {worst:.2e}"


def _check_table_energies():
    ms = solve_spec(ChainSpec(n_sites=100, bulk_field=0.9, impurity_scale=1.0))
    lam1, _ = discrete_mode_energies(0.9, 1.0, 100)
    err1 = abs(ms.energies[0] - lam1) / lam1
    ms = solve_spec(ChainSpec(n_sites=100, bulk_field=2.0, impurity_scale=3.0))
    _, lam2 = discrete_mode_energies(2.0, 3.0, 100)
    err2 = abs(ms.energies[-1] - lam2) / lam2
    ok = err1 < 1e-6 and err2 < 1e-6
    return ok, f"rel errors {err1:.2e}, {err2:.2e}"


def _check_thermo_magnetization():
    worst = 0.0
    for h, mu in ((2.0, 1.0), (0.5, 0.5), (2.0, 0.3)):
        ms = solve_spec(ChainSpec(n_sites=1000, bulk_field=h, impurity_scale=mu))
        worst = max(worst, abs(transverse_magnetization(ms, 1) - sigma_z1_thermo(h, mu)))
    return worst < 5e-3, f"max |numeric - thermo| {worst:.2e}"


def _check_kernel_vs_ed():
    spec = ChainSpec(n_sites=6, bulk_field=0.8, impurity_scale=1.7)
    ms = solve_spec(spec)
    g = correlation_kernel(ms).g_matrix
    ed = brute_force_ed(spec)
    worst = float(np.max(np.abs(np.diag(g) + ed.sigma_z)))
    return worst < 1e-10, f"max |G_nn + <sz_n>| {worst:.2e}"


def _check_partition_identity():
    rng = np.random.default_rng(3)
    lat = ClassicalLatticeSpec(m_x=3, m_y=4, beta=1.0,
                               k_x=rng.uniform(0.2, 0.8, 2), k_y=rng.uniform(0.2, 0.8, 3))
    t = row_transfer_matrix(lat)
    z_tm = float(np.trace(np.linalg.matrix_power(t, 4)))
    z_bf = brute_force_partition(lat)
    rel = abs(z_tm - z_bf) / z_bf
    return rel < 1e-10, f"relative error {rel:.2e}"


def _check_mapping_round_trip():
    spec = ChainSpec(n_sites=5, bulk_field=0.9, impurity_scale=0.7)
    lat = quantum_to_classical(spec, beta=1.3)
    j_n, h_n = classical_to_quantum(lat)
    from .chain import field_profile
    err = max(float(np.max(np.abs(j_n - 1.0))), float(np.max(np.abs(h_n - field_profile(spec)))))
    return err < 1e-12, f"round-trip error {err:.2e}"


def _check_finite_n_forms():
    err1 = abs(sigma_z1_mu0_finite_n(1.0, 100) - 0.05)
    err2 = abs(sigma_x1_thermo(0.6, 1.0) - 0.8)
    return err1 < 1e-12 and err2 < 1e-12, f"errors {err1:.2e}, {err2:.2e}"


def _check_xy_factor_two():
    spec_i = ChainSpec(model="ising", n_sites=6, bulk_field=0.7, impurity_scale=0.4)
    spec_x = ChainSpec(model="xy", n_sites=6, bulk_field=0.7, impurity_scale=0.4,
                       bulk_anisotropy=1.0, impurity_anisotropy=1.0)
    qi, qx = build_quadratic_form(spec_i), build_quadratic_form(spec_x)
    err = max(float(np.max(np.abs(qx.a_matrix - 2 * qi.a_matrix))),
              float(np.max(np.abs(qx.b_matrix - 2 * qi.b_matrix))),
              abs(qx.scalar_offset - 2 * qi.scalar_offset))
    return err <= 1e-14, f"max deviation {err:.2e}"


CHECKS = [
    ("quadratic-form transcription", _check_quadratic_form),
    ("spectrum reconstruction vs brute force", _check_spectrum_reconstruction),
    ("twofold degeneracy at mu=0", _check_degeneracy_mu0),
    ("discrete-mode closed forms", _check_table_energies),
    ("thermodynamic-limit magnetization", _check_thermo_magnetization),
    ("correlation kernel vs brute force", _check_kernel_vs_ed),
    ("partition-function identity", _check_partition_identity),
    ("quantum-classical round trip", _check_mapping_round_trip),
    ("finite-N closed-form values", _check_finite_n_forms),
    ("XY equals 2x Ising at gamma=1", _check_xy_factor_two),
]


def run_checks(report=print) -> bool:
    """Run every check; returns True iff all pass."""
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {exc!r}"
        all_ok &= ok
        report(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    return all_ok

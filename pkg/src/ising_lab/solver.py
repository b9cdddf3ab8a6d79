"""Exact diagonalization of the quadratic fermion form.

The quasiparticle energies Lambda_q are the singular values of
Z = A + B and the paired wavefunctions (psi_q, phi_q) its left/right
singular vectors,

    psi_q (A + B) = Lambda_q phi_q,     phi_q (A - B) = Lambda_q psi_q.

A brute-force many-body oracle on the spin basis is provided for tiny
chains to validate the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chain import ChainSpec, QuadraticForm, build_quadratic_form, field_profile, _bond_anisotropy

#: Relative threshold below which a singular value is treated as a zero mode.
ZERO_MODE_RTOL = 1e-12

SUBGAP = "SubGap"
BAND = "Band"
SUPRAGAP = "SupraGap"


@dataclass
class ModeSet:
    """Quasiparticle modes of a solved quadratic form.

    Attributes
    ----------
    energies : ndarray, shape (N,)
        Non-negative quasiparticle energies, ascending.
    psi : ndarray, shape (N, N)
        Row q holds the wavefunction psi_q (orthonormal rows).
    phi : ndarray, shape (N, N)
        Row q holds the paired wavefunction phi_q.
    ground_energy : float
        Many-body ground-state energy E_0.
    classifications : list of str or None
        Per-mode "SubGap" / "Band" / "SupraGap"; filled by
        `classify_modes`.
    """

    energies: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    ground_energy: float
    classifications: Optional[list] = field(default=None)

    @property
    def n_sites(self) -> int:
        return self.energies.shape[0]


def _first_nonzero_sign(vec: np.ndarray, tol: float = 1e-12) -> float:
    """Sign of the first component of `vec` exceeding `tol` in magnitude."""
    idx = np.flatnonzero(np.abs(vec) > tol)
    if idx.size == 0:
        return 1.0
    return 1.0 if vec[idx[0]] > 0 else -1.0


def solve(qf: QuadraticForm) -> ModeSet:
    """Diagonalize a QuadraticForm into a ModeSet.

    Uses the SVD of Z = A + B; energies are returned ascending with a
    deterministic sign convention: the first nonzero component of each
    psi_q is positive, and for (near-)zero modes phi_q is pinned the
    same way independently since the pairing no longer fixes its sign.
    Degenerate energies are ordered by the index of the first maximal
    |psi| component.
    """
    a, b = qf.a_matrix, qf.b_matrix
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite matrix entries")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("dimension mismatch between A and B")
    z = a + b
    u, lam, vt = np.linalg.svd(z)
    # ascending energies
    u = u[:, ::-1]
    lam = lam[::-1]
    vt = vt[::-1, :]
    psi = u.T.copy()
    phi = vt.copy()
    # deterministic order for degenerate energies
    first_max = np.argmax(np.abs(psi), axis=1)
    order = np.lexsort((first_max, lam))
    psi, phi, lam = psi[order], phi[order], lam[order]

    lam_max = lam[-1] if lam.size else 0.0
    zero_tol = ZERO_MODE_RTOL * max(lam_max, 1.0)
    for q in range(lam.size):
        s = _first_nonzero_sign(psi[q])
        psi[q] *= s
        if lam[q] < zero_tol:
            phi[q] *= _first_nonzero_sign(phi[q])
        else:
            phi[q] *= s

    e0 = qf.scalar_offset + 0.5 * (np.trace(a) - float(np.sum(lam)))
    return ModeSet(energies=lam, psi=psi, phi=phi, ground_energy=float(e0))


def band_edges(h: float, scale: float = 1.0) -> tuple:
    """Bulk single-quasiparticle band edges (bottom, top)."""
    return 2.0 * scale * abs(1.0 - h), 2.0 * scale * (1.0 + h)


def classify_modes(ms: ModeSet, h: float, scale: float = 1.0) -> list:
    """Classify each mode against the bulk band of the homogeneous chain.

    Parameters
    ----------
    ms : ModeSet
    h : float
        Bulk field of the underlying spec.
    scale : float
        Overall energy scale of the quadratic form relative to the
        Ising normalization (2 for the XY form).

    Returns
    -------
    list of str
        "SubGap" for Lambda below the band bottom, "SupraGap" above the
        band top, "Band" otherwise, with a finite-size tolerance of
        10x(band width)/N on both edges.  Also stored on the ModeSet.
    """
    bottom, top = band_edges(h, scale)
    eps = 10.0 * (top - bottom) / ms.n_sites
    out = []
    for lam in ms.energies:
        if lam < bottom - eps:
            out.append(SUBGAP)
        elif lam > top + eps:
            out.append(SUPRAGAP)
        else:
            out.append(BAND)
    ms.classifications = out
    return out


@dataclass(frozen=True)
class CorrelationKernel:
    """Ground-state contraction matrix G_nm = <B_n A_m>.

    Here A_n = c_n^+ + c_n and B_n = c_n^+ - c_n; under the solver
    convention G = -psi^T phi, and G_nn = -<sigma^z_n>.
    """

    g_matrix: np.ndarray


def correlation_kernel(ms: ModeSet) -> CorrelationKernel:
    """Wick-contraction kernel of the quasiparticle vacuum."""
    g = -(ms.psi.T @ ms.phi)
    return CorrelationKernel(g_matrix=g)


def many_body_spectrum(ms: ModeSet) -> np.ndarray:
    """All 2^N many-body levels E_0 + sum of occupied Lambda_q, ascending.

    Only sensible for small N (exponential cost); capped at N = 14.
    """
    n = ms.n_sites
    if n > 14:
        raise ValueError("many_body_spectrum capped at N = 14")
    levels = np.array([ms.ground_energy])
    for lam in ms.energies:
        levels = np.concatenate([levels, levels + lam])
    return np.sort(levels)


# ---------------------------------------------------------------------------
# brute-force spin-basis oracle
# ---------------------------------------------------------------------------

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_W = np.array([[0.0, 1.0], [-1.0, 0.0]])  # i*sigma^y, keeps everything real
_I2 = np.eye(2)


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    mats = [_I2] * n
    mats[site] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _two_site_operator(op1, site1, op2, site2, n) -> np.ndarray:
    mats = [_I2] * n
    mats[site1] = op1
    mats[site2] = op2
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@dataclass(frozen=True)
class EDResult:
    """Output of the dense spin-basis diagonalization.

    `sigma_xx[r]` holds the ground-state <sigma^x_1 sigma^x_r> for
    r = 2..N (1-based separation); index 0 and 1 are unused (nan).
    """

    spectrum: np.ndarray
    sigma_z: np.ndarray
    sigma_xx: np.ndarray


def brute_force_ed(spec: ChainSpec) -> EDResult:
    """Dense 2^N x 2^N diagonalization of the spin Hamiltonian.

    Returns the full ascending spectrum plus ground-state expectations
    <sigma^z_n> and <sigma^x_1 sigma^x_r>.  Capped at N = 12.
    """
    n = spec.n_sites
    if n > 12:
        raise ValueError("brute_force_ed capped at N = 12")
    h_n = field_profile(spec)
    dim = 2 ** n
    ham = np.zeros((dim, dim))
    if spec.model == "ising":
        for i in range(n - 1):
            ham -= _two_site_operator(_SX, i, _SX, i + 1, n)
        for i in range(n):
            ham -= h_n[i] * _site_operator(_SZ, i, n)
    else:
        g_n = _bond_anisotropy(spec)
        for i in range(n - 1):
            ham -= (1.0 + g_n[i]) * _two_site_operator(_SX, i, _SX, i + 1, n)
            # sigma^y sigma^y = -(i sigma^y) x (i sigma^y)
            ham += (1.0 - g_n[i]) * _two_site_operator(_W, i, _W, i + 1, n)
        for i in range(n):
            ham -= 2.0 * h_n[i] * _site_operator(_SZ, i, n)

    evals, evecs = np.linalg.eigh(ham)
    gs = evecs[:, 0]
    sigma_z = np.array([gs @ _site_operator(_SZ, i, n) @ gs for i in range(n)])
    sigma_xx = np.full(n + 1, np.nan)
    for r in range(2, n + 1):
        op = _two_site_operator(_SX, 0, _SX, r - 1, n)
        sigma_xx[r] = gs @ op @ gs
    return EDResult(spectrum=evals, sigma_z=sigma_z, sigma_xx=sigma_xx)


def solve_spec(spec: ChainSpec) -> ModeSet:
    """Convenience wrapper: build the quadratic form and solve it."""
    return solve(build_quadratic_form(spec))

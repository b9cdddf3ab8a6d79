"""Quantum-to-classical mapping onto a 2D Ising lattice on a cylinder.

The chain parameters (J_n, h_n) map to the column-resolved couplings of
a planar Ising model, periodic in the y direction, via

    J_n = beta * K_x(n),        e^(-2 h_n) = tanh(beta * K_y(n)).

The row transfer matrix is built with a symmetric splitting
T = V_y^(1/2) V_x V_y^(1/2), which is exact for the partition function
Tr(T^M_y) and keeps T symmetric.  An h_n = 0 column maps to an infinite
vertical coupling, handled as a hard constraint: the spins across such
a bond are locked equal, with relative weight 1 (aligned) / 0
(anti-aligned), i.e. the divergent e^(beta K) scale is dropped on that
column in both the transfer matrix and the brute-force sum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, field_profile
from .solver import many_body_spectrum, solve_spec


@dataclass(frozen=True)
class ClassicalLatticeSpec:
    """Couplings of the inhomogeneous 2D lattice.

    `k_x` holds the M_x - 1 horizontal couplings within a row, `k_y`
    the M_x vertical couplings (one per column; may contain +inf for a
    locked column).  Rows are periodic with period `m_y`.
    """

    m_x: int
    m_y: int
    beta: float
    k_x: np.ndarray
    k_y: np.ndarray

    def __post_init__(self):
        if self.m_y < 1:
            raise ValueError("m_y must be >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        kx = np.asarray(self.k_x, dtype=float)
        ky = np.asarray(self.k_y, dtype=float)
        if kx.shape != (self.m_x - 1,) or ky.shape != (self.m_x,):
            raise ValueError("coupling vector lengths must be (m_x - 1, m_x)")
        if np.any(kx <= 0) or not np.all(np.isfinite(kx)):
            raise ValueError("horizontal couplings must be finite and > 0")
        if np.any(ky <= 0):
            raise ValueError("vertical couplings must be > 0")

    def to_dict(self) -> dict:
        return {
            "m_x": self.m_x,
            "m_y": self.m_y,
            "beta": self.beta,
            "k_x": list(self.k_x),
            "k_y": ["inf" if math.isinf(k) else k for k in self.k_y],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ClassicalLatticeSpec":
        return cls(
            m_x=int(d["m_x"]),
            m_y=int(d["m_y"]),
            beta=float(d["beta"]),
            k_x=np.array(d["k_x"], dtype=float),
            k_y=np.array([float(k) for k in d["k_y"]]),
        )


def quantum_to_classical(spec: ChainSpec, beta: float, m_y: int = 1) -> ClassicalLatticeSpec:
    """Map a ChainSpec to lattice couplings: K_x = 1/beta,
    K_y = atanh(e^(-2 h_n))/beta.

    An h_n = 0 site (the mu = 0 impurity column) maps to K_y = +inf.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    h_n = field_profile(spec)
    if np.any(h_n < 0):
        raise ValueError("all site fields must be >= 0")
    n = spec.n_sites
    k_x = np.full(n - 1, 1.0 / beta)
    k_y = np.empty(n)
    for i, h in enumerate(h_n):
        k_y[i] = math.inf if h == 0.0 else math.atanh(math.exp(-2.0 * h)) / beta
    return ClassicalLatticeSpec(m_x=n, m_y=m_y, beta=beta, k_x=k_x, k_y=k_y)


def classical_to_quantum(lat: ClassicalLatticeSpec):
    """Invert the mapping; returns (J_n, h_n) parameter vectors.

    An infinite K_y gives back h_n = 0 exactly.
    """
    j_n = lat.beta * np.asarray(lat.k_x, dtype=float)
    h_n = np.empty(lat.m_x)
    for i, k in enumerate(lat.k_y):
        if math.isinf(k):
            h_n[i] = 0.0
        else:
            h_n[i] = -0.5 * math.log(math.tanh(lat.beta * k))
    return j_n, h_n


def _row_spins(m_x: int) -> np.ndarray:
    """All 2^m_x spin rows as +-1 arrays, index = binary code."""
    codes = np.arange(2 ** m_x)
    bits = (codes[:, None] >> np.arange(m_x - 1, -1, -1)) & 1
    return 1 - 2 * bits


def _vertical_factor_sqrt(a: float) -> np.ndarray:
    """Square root of the single-column bond matrix [[e^a, e^-a], [e^-a, e^a]].

    Eigenvalues 2 cosh a and 2 sinh a on the even/odd sectors; a = +inf
    is the locked bond, whose normalized limit is the identity.
    """
    if math.isinf(a):
        return np.eye(2)
    sp = math.sqrt(2.0 * math.cosh(a))
    sm = math.sqrt(2.0 * math.sinh(a))
    p = 0.5 * (sp + sm)
    q = 0.5 * (sp - sm)
    return np.array([[p, q], [q, p]])


def row_transfer_matrix(lat: ClassicalLatticeSpec) -> np.ndarray:
    """Dense 2^M_x row transfer matrix T = V_y^(1/2) V_x V_y^(1/2)."""
    if lat.m_x > 12:
        raise ValueError("row_transfer_matrix capped at m_x = 12")
    spins = _row_spins(lat.m_x)
    bond_energy = spins[:, :-1] * spins[:, 1:] @ (lat.beta * np.asarray(lat.k_x))
    v_x = np.exp(bond_energy)
    v_y_sqrt = np.array([[1.0]])
    for a in lat.beta * np.asarray(lat.k_y, dtype=float):
        v_y_sqrt = np.kron(v_y_sqrt, _vertical_factor_sqrt(a))
    return v_y_sqrt @ (v_x[:, None] * v_y_sqrt)


def brute_force_partition(lat: ClassicalLatticeSpec) -> float:
    """Exact partition sum over all 2^(M_x * M_y) configurations.

    Open boundaries in x, periodic in y.  Locked (infinite-K_y) columns
    contribute weight 1 when all their vertical bonds are aligned and 0
    otherwise.  Capped at M_x * M_y <= 24 sites.
    """
    mx, my = lat.m_x, lat.m_y
    if mx * my > 24:
        raise ValueError("brute_force_partition capped at m_x * m_y = 24 sites")
    locked = np.isinf(np.asarray(lat.k_y, dtype=float))
    ky_finite = np.where(locked, 0.0, lat.k_y)
    rows = _row_spins(mx).astype(float)
    z = 0.0
    # enumerate row codes per ring of the cylinder
    for config in np.ndindex(*([2 ** mx] * my)):
        lattice = rows[list(config)]  # (my, mx)
        e = float(np.sum((lattice[:, :-1] * lattice[:, 1:]) @ (lat.beta * np.asarray(lat.k_x))))
        vert = lattice * np.roll(lattice, -1, axis=0)
        if np.any(vert[:, locked] < 0):
            continue
        e += float(np.sum(vert @ (lat.beta * ky_finite)))
        z += math.exp(e)
    return z


def transfer_gap_error(spec: ChainSpec, beta: float, n_gaps: int = 3) -> float:
    """Low-temperature check of T ~ exp(-H/beta) on the mapped chain.

    The chain Hamiltonian is weakened by the step 1/beta before
    mapping, so beta * (-ln lambda_k/lambda_0) of the transfer spectrum
    approximates the first `n_gaps` many-body gaps of the chain.
    Returns the maximum relative gap error; it shrinks as beta grows
    (approximate correspondence, exact only in the continuum limit).
    """
    n = spec.n_sites
    if n > 12:
        raise ValueError("transfer_gap_error capped at N = 12")
    h_n = field_profile(spec)
    if np.any(h_n <= 0):
        raise ValueError("requires strictly positive site fields")
    k_x = np.full(n - 1, 1.0 / beta ** 2)
    k_y = np.array([math.atanh(math.exp(-2.0 * h / beta)) / beta for h in h_n])
    lat = ClassicalLatticeSpec(m_x=n, m_y=1, beta=beta, k_x=k_x, k_y=k_y)
    t = row_transfer_matrix(lat)
    eigs = np.sort(np.linalg.eigvalsh(t))[::-1]
    gaps_classical = beta * (-np.log(eigs[1:1 + n_gaps] / eigs[0]))

    ms = solve_spec(spec)
    levels = many_body_spectrum(ms)
    # level-by-level correspondence: both spectra have dimension 2^N
    gaps_quantum = (levels - levels[0])[1:1 + n_gaps]
    k = min(len(gaps_quantum), len(gaps_classical))
    return float(np.max(np.abs(gaps_classical[:k] - gaps_quantum[:k]) / gaps_quantum[:k]))

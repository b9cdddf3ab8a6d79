"""Closed-form oracles: discrete-mode energies and wavefunctions,
thermodynamic-limit observables, finite-N analytic magnetization and
susceptibility, and the two impurity length scales.

All expressions are written in units of J = 1 with critical field
h_c = 1.  Signs follow the solver convention (large-h ground state is
the fermion vacuum, <sigma^z> -> +1), calibrated once against the
numeric pipeline at (mu=1, h=2) for sigma^z and (mu=1, h=0.5) for
sigma^x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import quad

R2_NONE = "None"
R2_BELOW = "BelowBand"
R2_ABOVE = "AboveBand"


@dataclass(frozen=True)
class RegionFlags:
    """Membership of a point (h, mu) in the discrete-mode regions.

    R1 is the ferromagnetic region h <= 1 where the exponentially small
    mode Lambda_1 lives; R2 hosts the isolated mode Lambda_2 either
    below the band (h > 1, small |mu|) or above it (large |mu|).
    Boundary points (equalities) are classified as outside.
    """

    in_r1: bool
    in_r2: bool
    r2_branch: str


def region_flags(h: float, mu: float) -> RegionFlags:
    """Classify (h, mu); requires h > 0."""
    if h <= 0:
        raise ValueError("h must be > 0")
    in_r1 = h <= 1.0
    above = abs(mu) > math.sqrt(1.0 + 1.0 / h)
    below = h > 1.0 and abs(mu) < math.sqrt(1.0 - 1.0 / h)
    if above:
        branch = R2_ABOVE
    elif below:
        branch = R2_BELOW
    else:
        branch = R2_NONE
    return RegionFlags(in_r1=in_r1, in_r2=above or below, r2_branch=branch)


def discrete_mode_energies(h: float, mu: float, n_sites: int):
    """Closed-form subgap/supragap energies (Lambda_1, Lambda_2).

    Each entry is present (a float) exactly when the corresponding
    region flag is set, otherwise None.  Lambda_1 is evaluated in log
    space so that it survives N large enough for h^N to underflow.
    """
    flags = region_flags(h, mu)
    lam1 = lam2 = None
    if flags.in_r1:
        if mu == 0.0 or h == 1.0:
            lam1 = 0.0
        else:
            x = 1.0 + (mu * mu - 1.0) * h * h
            log_pref = math.log(2.0 * abs(mu) * (1.0 - h * h)) - 0.5 * math.log(abs(x))
            lam1 = math.exp(log_pref + n_sites * math.log(h))
    if flags.in_r2:
        if mu == 0.0:
            lam2 = 0.0
        else:
            m2 = mu * mu - 1.0
            rad = (1.0 + m2 * h * h) / m2
            if rad <= 0:
                raise ValueError("Lambda_2 radicand non-positive inside R2")
            lam2 = 2.0 * abs(mu) * math.sqrt(rad)
    return lam1, lam2


def _normalize_signed(psi: np.ndarray, phi: np.ndarray):
    """Unit-normalize a (psi, phi) pair, first nonzero psi entry positive."""
    psi = psi / np.linalg.norm(psi)
    phi = phi / np.linalg.norm(phi)
    idx = np.flatnonzero(np.abs(psi) > 1e-12)
    if idx.size and psi[idx[0]] < 0:
        psi, phi = -psi, -phi
    return psi, phi


def discrete_mode_wavefunctions(h: float, mu: float, n_sites: int) -> dict:
    """Normalized closed-form wavefunctions of the discrete modes.

    Returns a dict with keys "mode1" and/or "mode2", each a pair
    (psi, phi) of unit-norm length-N arrays, present per the region
    flags.  At mu = 0, h > 1 the exact finite-N pair is returned:
    psi_n = sqrt((h^2-1)/(1-h^(-2N))) h^(-n), phi_n = delta_n1,
    normalized to machine precision by construction.
    """
    flags = region_flags(h, mu)
    if not (flags.in_r1 or flags.in_r2):
        raise ValueError("point outside both discrete-mode regions")
    n = np.arange(1, n_sites + 1, dtype=float)
    out = {}
    if flags.in_r1:
        x = 1.0 + (mu * mu - 1.0) * h * h
        # psi_n = sqrt(1-h^2) h^(N-n) (1 - mu^2 h^(2n)/X), kept in the
        # decaying form to avoid overflow of h^(-n)
        psi = h ** (n_sites - n) * (1.0 - mu * mu * h ** (2 * n) / x)
        phi = mu * mu * h ** n
        # boundary entry sign calibrated to the solver pairing convention
        phi[0] = mu * h
        out["mode1"] = _normalize_signed(psi, phi)
    if flags.in_r2:
        lam1, lam2 = discrete_mode_energies(h, mu, n_sites)
        if mu == 0.0:
            pref = math.sqrt((h * h - 1.0) / -math.expm1(-2.0 * n_sites * math.log(h)))
            psi = pref * h ** (-n)
            phi = np.zeros(n_sites)
            phi[0] = 1.0
            out["mode2"] = (psi, phi)
        else:
            t = -1.0 / (h * (mu * mu - 1.0))
            psi = t ** n
            phi = np.empty(n_sites)
            phi[0] = 2.0 * mu * h * psi[0] / lam2
            phi[1:] = (2.0 * h * psi[1:] - 2.0 * psi[:-1]) / lam2
            out["mode2"] = _normalize_signed(psi, phi)
    return out


def _band_dispersion(theta: float, h: float) -> float:
    return 2.0 * math.sqrt(1.0 + h * h - 2.0 * h * math.cos(theta))


def sigma_z1_thermo(h: float, mu: float) -> float:
    """Thermodynamic-limit impurity transverse magnetization <sigma^z_1>.

    The band contribution is an adaptive quadrature over the continuum
    of quasiparticle angles; the exponentially small mode contributes
    nothing in the limit; the isolated R2 mode adds its occupation term
    when present.  Requires h > 0 and h != 1 (integrable singularity at
    criticality is not resolved here).
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    if h == 1.0:
        raise ValueError("sigma_z1_thermo undefined at h = 1 (singular integrand)")

    def integrand(theta):
        lam = _band_dispersion(theta, h)
        d = 1.0 + (mu * mu - 1.0) ** 2 * h * h + 2.0 * h * (mu * mu - 1.0) * math.cos(theta)
        return math.sin(theta) ** 2 * (1.0 - 2.0 * mu * h / lam) ** 2 / d

    val, err = quad(integrand, 0.0, math.pi, epsabs=1e-10, epsrel=1e-12, limit=400)
    if not math.isfinite(val) or err > 1e-6:
        raise RuntimeError(f"quadrature did not converge (error estimate {err:.3e})")
    result = 1.0 - val / math.pi

    flags = region_flags(h, mu)
    if h < 1.0:
        x = 1.0 + (mu * mu - 1.0) * h * h
        result -= (1.0 - h * h) / (2.0 * x)
    if flags.in_r2:
        if mu == 0.0:
            psi1 = math.sqrt(h * h - 1.0) / h
            phi1 = 1.0
        else:
            m2 = mu * mu - 1.0
            psi1 = -math.sqrt(m2 * m2 * h * h - 1.0) / (h * m2)
            _, lam2 = discrete_mode_energies(h, mu, 10)
            phi1 = 2.0 * mu * h * psi1 / lam2
        v1 = 0.5 * (psi1 - phi1)
        result -= 2.0 * v1 * v1
    return result


def sigma_z1_mu0_finite_n(h: float, n_sites: int) -> float:
    """Finite-N impurity magnetization at mu = 0:
    <sigma^z_1> = (1/2h) sqrt((h^2-1)/(1-h^(-2N))).

    The removable singularity at h = 1 is handled exactly, returning
    1/(2 sqrt(N)).
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    if h == 1.0:
        return 0.5 / math.sqrt(n_sites)
    t = math.log(h)
    num = math.expm1(2.0 * t)  # h^2 - 1
    e = -2.0 * n_sites * t
    if e < -700.0:
        den = 1.0  # h^(-2N) underflows (h > 1, large N)
    elif e > 700.0:
        # h < 1 with h^(-2N) astronomically large: ratio -> (1-h^2) h^(2N)
        return 0.5 / h * math.sqrt(-num * math.exp(-e))
    else:
        den = -math.expm1(e)  # 1 - h^(-2N)
    return 0.5 / h * math.sqrt(num / den)


def chi_z1_mu0_finite_n(h: float, n_sites: int) -> float:
    """Finite-N impurity susceptibility chi = d<sigma^z_1>/dh at mu = 0.

    Analytic derivative of `sigma_z1_mu0_finite_n`, evaluated in
    extended precision to survive the h -> 1 cancellations; exactly
    (N-1)/(4 sqrt(N)) at h = 1.
    """
    n = n_sites
    if h <= 0:
        raise ValueError("h must be > 0")
    if h == 1.0:
        return (n - 1) / (4.0 * math.sqrt(n))
    with mpmath.workdps(60):
        hh = mpmath.mpf(h)
        hm = hh ** (-2 * n)
        m = mpmath.sqrt((hh * hh - 1) / (1 - hm)) / (2 * hh)
        deriv = m * (-1 / hh + hh / (hh * hh - 1) - n * hh ** (-2 * n - 1) / (1 - hm))
        return float(deriv)


def chi_z1_thermo(h: float) -> float:
    """Thermodynamic-limit susceptibility Theta(h-1)/(2 h^2 sqrt(h^2-1))."""
    if h <= 0:
        raise ValueError("h must be > 0")
    if h <= 1.0:
        return 0.0
    return 1.0 / (2.0 * h * h * math.sqrt(h * h - 1.0))


def chi_z1_peak_expansion(h: float, n_sites: int) -> float:
    """Near-critical expansion N^(1/2) (1/4 + (N/12 - 1)(h-1)/2)."""
    return math.sqrt(n_sites) * (0.25 + (n_sites / 12.0 - 1.0) * (h - 1.0) / 2.0)


def sigma_x1_thermo(h: float, mu: float) -> float:
    """Thermodynamic-limit longitudinal impurity magnetization.

    sqrt((1-h^2)/(1+h^2(mu^2-1))) for h < 1, zero at and above the
    critical point.
    """
    if h < 0:
        raise ValueError("h must be >= 0")
    if h >= 1.0:
        return 0.0
    return math.sqrt((1.0 - h * h) / (1.0 + h * h * (mu * mu - 1.0)))


def sigma_x1_near_hc(h: float, mu: float) -> float:
    """Leading behavior sqrt(2(1-h))/|mu| for h -> 1^-."""
    if mu == 0.0:
        raise ValueError("mu must be nonzero for the near-critical form")
    if h >= 1.0:
        return 0.0
    return math.sqrt(2.0 * (1.0 - h)) / abs(mu)


def sigma_x1_finite_n(h: float, mu: float, n_sites: int) -> float:
    """Finite-N longitudinal magnetization near criticality.

    Thermodynamic value times the finite-size factor
    1 + mu^2 (1-h^2)/(1+(mu^2-1)h^2) N h^(2N).  Valid for h -> 1^- where
    the correction term is the leading one; for h well below 1 the
    factor is exponentially close to 1.
    """
    base = sigma_x1_thermo(h, mu)
    if base == 0.0:
        return 0.0
    e = 2.0 * n_sites * math.log(h) if h > 0 else -math.inf
    h2n = math.exp(e) if e > -700.0 else 0.0
    x = 1.0 + (mu * mu - 1.0) * h * h
    return base * (1.0 + mu * mu * (1.0 - h * h) / x * n_sites * h2n)


@dataclass(frozen=True)
class TwoLengthScales:
    """Bulk correlation length and the impurity-generated length."""

    xi_bulk: float
    xi_impurity: float


def two_length_scales(h: float, mu: float) -> TwoLengthScales:
    """xi(h) = 1/(2|ln h|) and xi_mu = mu^2/|1-mu^2|.

    xi(h) is fixed by identifying h^(2N) with e^(-N/xi); both scales
    return +inf at their singular points (h = 1, |mu| = 1) as a
    documented sentinel.
    """
    if h <= 0:
        raise ValueError("h must be > 0")
    xi_bulk = math.inf if h == 1.0 else 1.0 / (2.0 * abs(math.log(h)))
    m2 = mu * mu
    xi_imp = math.inf if m2 == 1.0 else m2 / abs(1.0 - m2)
    return TwoLengthScales(xi_bulk=xi_bulk, xi_impurity=xi_imp)

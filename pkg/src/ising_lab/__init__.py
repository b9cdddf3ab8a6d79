"""Free-fermion laboratory for a boundary impurity in a transverse-field spin chain.

The package builds the quadratic-fermion representation of an open
Ising/XY chain whose first-site field is rescaled by an impurity factor,
diagonalizes it exactly, evaluates impurity observables and their
closed-form limits, and runs the finite-size-scaling estimators used to
extract critical exponents.  A small quantum-to-classical mapping onto a
2D lattice with a row transfer matrix is included, together with
brute-force oracles at tiny sizes.
"""

from .chain import ChainSpec, QuadraticForm, build_quadratic_form, field_profile
from .solver import ModeSet, CorrelationKernel, solve, classify_modes, correlation_kernel
from . import closed_forms, observables, fss, classical

__all__ = [
    "ChainSpec",
    "QuadraticForm",
    "build_quadratic_form",
    "field_profile",
    "ModeSet",
    "CorrelationKernel",
    "solve",
    "classify_modes",
    "correlation_kernel",
    "closed_forms",
    "observables",
    "fss",
    "classical",
]

__version__ = "0.1.0"

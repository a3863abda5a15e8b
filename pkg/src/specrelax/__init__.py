"""specrelax: pseudospectral schemes with kernel-based relaxation for 1D
hyperbolic conservation laws.

The package provides Fourier and mapped-Chebyshev collocation grids, a
family of summability-kernel spectral filters, the relaxation (SR),
purging (SP), vanishing-viscosity (SVV) and plain pseudospectral (PPS)
schemes, four physical models (Burgers, shallow water, compressible Euler,
and a 1D wall model with a Hilbert-transform velocity law), exact and
finite-volume reference solvers, and analysis utilities for convergence
tables and analyticity-strip singularity tracking.
"""

from .grids import BasisError, ChebyshevGrid, ConsistencyError, FourierGrid, SpectralField, make_grid
from .kernels import KernelSpec, kernel_coeffs, relaxation_params, svv_q_coeffs

__version__ = "0.1.0"

__all__ = [
    "BasisError",
    "ChebyshevGrid",
    "ConsistencyError",
    "FourierGrid",
    "SpectralField",
    "make_grid",
    "KernelSpec",
    "kernel_coeffs",
    "relaxation_params",
    "svv_q_coeffs",
    "__version__",
]

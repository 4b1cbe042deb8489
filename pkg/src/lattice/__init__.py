"""
Lattice layer: periodic grid over the flat complex torus, scalar fields,
spectral differentiation, quadrature and the finite-difference oracle.
"""

from .field import ScalarField
from .grid import (
    AxisError,
    Grid,
    GridError,
    GridMismatchError,
    GridSpec,
    LatticeError,
    make_grid,
    require_same_grid,
)
from .oracle import fd_hol, fd_oracle
from .quadrature import integrate, integrate_density, mean, volume_form_constant
from .sampling import random_bandlimited, random_complex_bandlimited
from .spectral import d_antihol, d_hol, d_real, dealias, flat_laplacian, fourier_tail

__all__ = [
    "AxisError",
    "Grid",
    "GridError",
    "GridMismatchError",
    "GridSpec",
    "LatticeError",
    "ScalarField",
    "d_antihol",
    "d_hol",
    "d_real",
    "dealias",
    "fd_hol",
    "fd_oracle",
    "flat_laplacian",
    "fourier_tail",
    "integrate",
    "integrate_density",
    "make_grid",
    "mean",
    "random_bandlimited",
    "random_complex_bandlimited",
    "require_same_grid",
    "volume_form_constant",
]

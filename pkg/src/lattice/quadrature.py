"""
Quadrature on the lattice.

∫ f ωⁿ is realized as n!·2ⁿ·h^{2n}·Σ f·det g (the i dz∧dz̄ = 2 dx∧dy factor
is absorbed once into the constant). Sums run over the C-order flattening
with numpy's pairwise summation, so results are reproducible bit for bit.
"""

import math
from typing import TYPE_CHECKING, Union

import numpy as np

from .field import ScalarField
from .grid import Grid, require_same_grid

if TYPE_CHECKING:
    from ..geometry.metric import HermitianMetric


def volume_form_constant(grid: Grid) -> float:
    """n!·2ⁿ·h^{2n}, the weight of one lattice cell under ωⁿ."""
    return math.factorial(grid.n) * (2.0 ** grid.n) * grid.h ** grid.ndim


def integrate_density(values: np.ndarray, density: np.ndarray, grid: Grid) -> complex:
    """Σ values·density times the cell weight, both arrays on the lattice shape."""
    product = np.ascontiguousarray(np.asarray(values) * np.asarray(density))
    return complex(volume_form_constant(grid) * np.sum(product.ravel()))


def integrate(f: Union[ScalarField, float], g: "HermitianMetric") -> complex:
    """
    ∫ f ωⁿ for the metric g.

    Args:
        f: integrand (a plain number is treated as a constant field)
        g: metric providing the volume density det g

    Returns:
        complex value of the integral

    Raises:
        GridMismatchError: f and g live on different grids
    """
    if isinstance(f, ScalarField):
        require_same_grid(f.grid, g.grid)
        values = f.values
    else:
        values = np.full(g.grid.shape, f, dtype=np.complex128)
    return integrate_density(values, g.det.values, g.grid)


def mean(f: ScalarField, g: "HermitianMetric") -> complex:
    """(1/V)∫ f ωⁿ."""
    return integrate(f, g) / integrate(1.0, g)

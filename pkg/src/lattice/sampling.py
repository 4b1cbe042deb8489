"""
Seeded band-limited random fields.

Coefficients come from numpy's PCG64 generator (default_rng) on the mode box
|m_a| ≤ max_mode, drawn in C order with standard deviation 1/max(1, |m|).
The field is the real part of the inverse transform rescaled so its
sup-norm equals the requested amplitude.
"""

import logging
from typing import Union

import numpy as np

from .field import ScalarField
from .grid import Grid, LatticeError
from .spectral import inverse, spectrum_indices

logger = logging.getLogger("chern_flow")

Seed = Union[int, np.random.Generator]


def _bandlimited_values(rng: np.random.Generator, max_mode: int, grid: Grid) -> np.ndarray:
    if max_mode < 0 or max_mode > grid.N // 3:
        raise LatticeError(
            f"max_mode must lie in 0..{grid.N // 3} (⌊N/3⌋) for N={grid.N}, got {max_mode}"
        )
    box = (2 * max_mode + 1,) * grid.ndim
    coeffs = rng.standard_normal(box) + 1j * rng.standard_normal(box)

    m = np.arange(-max_mode, max_mode + 1, dtype=float)
    radius_sq = np.zeros((1,) * grid.ndim)
    for a in range(grid.ndim):
        shape = [1] * grid.ndim
        shape[a] = m.size
        radius_sq = radius_sq + m.reshape(shape) ** 2
    coeffs = coeffs / np.maximum(1.0, np.sqrt(radius_sq))

    full = np.zeros(grid.shape, dtype=np.complex128)
    full[np.ix_(*spectrum_indices(grid, max_mode))] = coeffs
    return inverse(full, grid)


def _scaled(values: np.ndarray, amplitude: float) -> np.ndarray:
    peak = float(np.max(np.abs(values)))
    if amplitude == 0.0 or peak == 0.0:
        return np.zeros_like(values)
    return values * (amplitude / peak)


def random_bandlimited(seed: Seed, amplitude: float, max_mode: int, grid: Grid) -> ScalarField:
    """
    Real band-limited random field, deterministic in seed.

    Args:
        seed: integer seed, or a Generator to draw from in sequence
        amplitude: sup-norm of the result (≥ 0)
        max_mode: highest |m| on any axis, at most ⌊N/3⌋
        grid: target lattice

    Returns:
        Real ScalarField with sup-norm equal to amplitude

    Raises:
        LatticeError: max_mode above ⌊N/3⌋ or negative amplitude
    """
    if amplitude < 0:
        raise LatticeError(f"amplitude must be non-negative, got {amplitude}")
    rng = np.random.default_rng(seed)
    values = _bandlimited_values(rng, max_mode, grid).real
    return ScalarField(grid, _scaled(values, amplitude), is_real=True)


def random_complex_bandlimited(seed: Seed, amplitude: float, max_mode: int, grid: Grid) -> ScalarField:
    """Complex counterpart of random_bandlimited (auxiliary forms and vector fields)."""
    if amplitude < 0:
        raise LatticeError(f"amplitude must be non-negative, got {amplitude}")
    rng = np.random.default_rng(seed)
    values = _bandlimited_values(rng, max_mode, grid)
    return ScalarField(grid, _scaled(values, amplitude))

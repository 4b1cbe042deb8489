"""
Spectral complex differentiation on the lattice.

∂/∂z^k = ½(∂_x − i∂_y) and ∂/∂z̄^k = ½(∂_x + i∂_y) act in Fourier space as
multiplication by ½(i k_x + k_y) and ½(i k_x − k_y). Second derivatives are
products of first-derivative symbols, so mixed derivatives commute exactly.

The array helpers take component-major arrays whose trailing axes are the
lattice; the ScalarField wrappers are the public face of the layer.
"""

import logging
from typing import Sequence

import numpy as np

from .field import ScalarField
from .grid import AxisError, Grid

logger = logging.getLogger("chern_flow")


def forward(values: np.ndarray, grid: Grid) -> np.ndarray:
    """FFT over the trailing lattice axes."""
    return np.fft.fftn(values, axes=grid.field_axes(np.ndim(values)))


def inverse(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Inverse FFT over the trailing lattice axes."""
    return np.fft.ifftn(coeffs, axes=grid.field_axes(np.ndim(coeffs)))


def hol_gradient(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Stack of ∂_k values for k = 1..n, new leading axis."""
    coeffs = forward(values, grid)
    return np.stack([inverse(coeffs * symbol, grid) for symbol in grid.hol_symbols])


def antihol_gradient(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Stack of ∂_k̄ values for k = 1..n, new leading axis."""
    coeffs = forward(values, grid)
    return np.stack([inverse(coeffs * symbol, grid) for symbol in grid.antihol_symbols])


def mixed_hessian(values: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Mixed complex Hessian ∂_j∂_k̄ of the given array.

    Returns:
        Array with two new leading axes [j, k].
    """
    coeffs = forward(values, grid)
    rows = []
    for alpha in grid.hol_symbols:
        rows.append(np.stack([inverse(coeffs * alpha * beta, grid) for beta in grid.antihol_symbols]))
    return np.stack(rows)


def dealias_array(values: np.ndarray, grid: Grid) -> np.ndarray:
    coeffs = forward(values, grid)
    return inverse(np.where(grid.dealias_mask, coeffs, 0.0), grid)


def apply_symbol(values: np.ndarray, grid: Grid, symbol: np.ndarray) -> np.ndarray:
    return inverse(forward(values, grid) * symbol, grid)


# =============================================================================
# ScalarField operations
# =============================================================================

def d_hol(f: ScalarField, k: int) -> ScalarField:
    """
    Holomorphic derivative ∂/∂z^k.

    Args:
        f: field to differentiate
        k: complex axis, 1..n

    Returns:
        ScalarField; exact for band-limited f

    Raises:
        AxisError: k out of range
    """
    index = f.grid.check_complex_axis(k)
    return ScalarField(f.grid, apply_symbol(f.values, f.grid, f.grid.hol_symbols[index]))


def d_antihol(f: ScalarField, k: int) -> ScalarField:
    """Antiholomorphic derivative ∂/∂z̄^k, k in 1..n."""
    index = f.grid.check_complex_axis(k)
    return ScalarField(f.grid, apply_symbol(f.values, f.grid, f.grid.antihol_symbols[index]))


def d_real(f: ScalarField, axis: int) -> ScalarField:
    """Spectral derivative along a real axis (0-based, order x¹, y¹, x², y²)."""
    if not 0 <= axis < f.grid.ndim:
        raise AxisError(f"real axis {axis} out of range for {f.grid.ndim} axes")
    return ScalarField(
        f.grid,
        apply_symbol(f.values, f.grid, f.grid.real_axis_symbols[axis]),
        is_real=f.is_real,
    )


def dealias(f: ScalarField) -> ScalarField:
    """Zero every Fourier mode with some axis index above ⌊N/3⌋; idempotent."""
    return ScalarField(f.grid, dealias_array(f.values, f.grid), is_real=f.is_real)


def flat_laplacian(f: ScalarField) -> ScalarField:
    """Σ_k ∂_k∂_k̄ f, the Chern Laplacian of the flat metric."""
    return ScalarField(
        f.grid,
        apply_symbol(f.values, f.grid, f.grid.flat_laplacian_symbol),
        is_real=f.is_real,
    )


def fourier_tail(values: np.ndarray, grid: Grid) -> float:
    """
    Relative spectral energy beyond the dealiasing band.

    Used as a resolution figure: a field whose tail is at rounding level is
    resolved by the grid.
    """
    coeffs = forward(values, grid)
    total = float(np.sum(np.abs(coeffs) ** 2))
    if total == 0.0:
        return 0.0
    tail = float(np.sum(np.abs(np.where(grid.dealias_mask, 0.0, coeffs)) ** 2))
    return float(np.sqrt(tail / total))


def max_mode(f: ScalarField, threshold: float = 1e-12) -> int:
    """Largest |m| on any axis carrying a coefficient above threshold·max."""
    coeffs = np.abs(forward(f.values, f.grid))
    peak = float(np.max(coeffs))
    if peak == 0.0:
        return 0
    active = np.argwhere(coeffs > threshold * peak)
    return int(np.max(np.abs(f.grid.modes[active])))


def spectrum_indices(grid: Grid, limit: int) -> Sequence[np.ndarray]:
    """FFT index arrays for the box |m_a| ≤ limit, one per axis."""
    m = np.arange(-limit, limit + 1)
    return [m % grid.N] * grid.ndim

"""
Centered fourth-order finite differences.

An independent derivative path used to cross-check the spectral pipeline.
Periodic shifts use np.roll; a shift of +1 reads f(x + h).
"""

import numpy as np

from .field import ScalarField
from .grid import AxisError

SUPPORTED_ORDERS = (1, 2)


def _shift(values: np.ndarray, axis: int, steps: int) -> np.ndarray:
    return np.roll(values, -steps, axis=axis)


def fd_oracle(f: ScalarField, axis: int, order: int) -> ScalarField:
    """
    Fourth-order centered derivative along one real axis.

    Args:
        f: smooth-sampled field
        axis: real axis, 0-based in the order (x¹, y¹, x², y²)
        order: 1 or 2

    Returns:
        ScalarField with the finite-difference derivative

    Raises:
        AxisError: axis out of range or unsupported order
    """
    grid = f.grid
    if not 0 <= axis < grid.ndim:
        raise AxisError(f"real axis {axis} out of range for {grid.ndim} axes")
    if order not in SUPPORTED_ORDERS:
        raise AxisError(f"finite-difference order must be 1 or 2, got {order}")

    v = f.values
    p1, p2 = _shift(v, axis, 1), _shift(v, axis, 2)
    m1, m2 = _shift(v, axis, -1), _shift(v, axis, -2)
    h = grid.h
    if order == 1:
        result = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
    else:
        result = (-p2 + 16.0 * p1 - 30.0 * v + 16.0 * m1 - m2) / (12.0 * h * h)
    return ScalarField(grid, result, is_real=f.is_real)


def fd_hol(f: ScalarField, k: int) -> ScalarField:
    """½(∂_x − i∂_y) along complex axis k (1-based) by finite differences."""
    index = f.grid.check_complex_axis(k)
    dx = fd_oracle(f, 2 * index, 1)
    dy = fd_oracle(f, 2 * index + 1, 1)
    return ScalarField(f.grid, 0.5 * (dx.values - 1j * dy.values))

"""
Structural residuals: pluriclosedness of the metric form.

For n = 2 the only component of ∂∂̄ω is the scalar

    ∂₁∂₁̄g₂₂̄ + ∂₂∂₂̄g₁₁̄ − ∂₁∂₂̄g₂₁̄ − ∂₂∂₁̄g₁₂̄,

a constant-coefficient linear operator on the components. Its Fourier
symbols are shared with the projector in metricgen.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..lattice import Grid, ScalarField
from ..lattice.spectral import forward, inverse
from .metric import HermitianMetric
from .tensor import GeometryError

logger = logging.getLogger("chern_flow")

# Pluriclosed (∂∂̄ω = 0) and Gauduchon (∂∂̄ω^{n−1} = 0) coincide for n = 2
GAUDUCHON_THRESHOLD = 1e-9


def pluriclosed_symbols(grid: Grid) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Fourier coefficients (c₁₁, c₂₂, c₁₂, c₂₁) of the n = 2 residual.

    residual^ = c₁₁ĝ₁₁̄ + c₂₂ĝ₂₂̄ + c₁₂ĝ₁₂̄ + c₂₁ĝ₂₁̄ mode by mode.
    """
    if grid.n != 2:
        raise GeometryError(f"pluriclosed symbols are defined for n=2, got n={grid.n}")
    a1, a2 = grid.hol_symbols
    b1, b2 = grid.antihol_symbols
    shape = grid.shape
    return (
        np.broadcast_to(a2 * b2, shape),
        np.broadcast_to(a1 * b1, shape),
        np.broadcast_to(-a2 * b1, shape),
        np.broadcast_to(-a1 * b2, shape),
    )


def pluriclosed_residual_array(G: np.ndarray, grid: Grid) -> np.ndarray:
    """∂∂̄ω scalar for raw n = 2 components (zeros for n = 1)."""
    if grid.n == 1:
        return np.zeros(grid.shape)
    c11, c22, c12, c21 = pluriclosed_symbols(grid)
    coeffs = forward(G, grid)
    residual = c11 * coeffs[0, 0] + c22 * coeffs[1, 1] + c12 * coeffs[0, 1] + c21 * coeffs[1, 0]
    return inverse(residual, grid).real


def pluriclosed_residual_field(g: HermitianMetric) -> ScalarField:
    """Scalar field ∂∂̄ω; identically zero when n = 1."""
    return ScalarField(g.grid, pluriclosed_residual_array(g.components, g.grid), is_real=True)


def pluriclosed_residual(g: HermitianMetric, k: Optional[int] = None) -> float:
    """
    Sup-norm of the components of ∂∂̄(ω^k).

    Args:
        g: metric
        k: power, 1..n−1 (defaults to 1); ignored for n = 1 where the
            residual is vacuously 0

    Raises:
        GeometryError: k out of range
    """
    if g.n == 1:
        if k not in (None, 0, 1):
            raise GeometryError(f"k must be ≤ n−1 = 0 for n=1, got {k}")
        return 0.0
    if k is None:
        k = 1
    if not 1 <= k <= g.n - 1:
        raise GeometryError(f"k must lie in 1..{g.n - 1}, got {k}")
    return pluriclosed_residual_field(g).sup_norm()


def is_gauduchon(g: HermitianMetric) -> bool:
    """True when ∂∂̄ω^{n−1} vanishes to GAUDUCHON_THRESHOLD (always for n = 1)."""
    return g.n == 1 or pluriclosed_residual(g, g.n - 1) < GAUDUCHON_THRESHOLD

"""
Chern curvature, Chern-Ricci form, scalar curvature and Chern Laplacian.

Curvature comes from the carried derivative of Γ and the Ricci form from
the chain rule for ∂∂̄ log det g, so neither differentiates a product
spectrally.
"""

from dataclasses import dataclass

import numpy as np

from ..lattice import ScalarField, require_same_grid
from ..lattice.spectral import mixed_hessian
from .connection import christoffel_jets
from .metric import HermitianMetric
from .tensor import TensorField, signature


@dataclass(frozen=True)
class CurvatureFields:
    """
    Attributes:
        mixed: R_{ij̄k}^p = −∂_j̄ Γ^p_{ik}, signature "hahH"
        lowered: R_{ij̄kl̄} = g_{pl̄} R_{ij̄k}^p, signature "haha"
    """
    mixed: TensorField
    lowered: TensorField


def curvature(g: HermitianMetric) -> CurvatureFields:
    _, d_gamma = christoffel_jets(g)  # [j, p, i, k] = ∂_j̄ Γ^p_{ik}
    mixed = -np.einsum("jpik...->ijkp...", d_gamma)
    lowered = np.einsum("pl...,ijkp...->ijkl...", g.components, mixed)
    return CurvatureFields(
        mixed=TensorField(g.grid, signature("hahH"), mixed),
        lowered=TensorField(g.grid, signature("haha"), lowered),
    )


def chern_ricci(g: HermitianMetric) -> TensorField:
    """R_{ij̄} = −∂_i∂_j̄ log det g, with ∂_j̄ log det g = g^{kl̄} ∂_j̄ g_{kl̄}."""
    dH, _ = g.inverse_derivatives
    hessian = (np.einsum("ikl...,jkl...->ij...", dH, g.antihol_derivative)
               + np.einsum("kl...,jikl...->ij...", g.inverse, g.mixed_derivative))
    return TensorField(g.grid, signature("ha"), -hessian)


def chern_scalar(g: HermitianMetric) -> ScalarField:
    """R = g^{ij̄} R_{ij̄}, real."""
    ricci = chern_ricci(g)
    values = np.einsum("ij...,ij...->...", g.inverse, ricci.components)
    return ScalarField(g.grid, values.real, is_real=True)


def chern_laplacian(g: HermitianMetric, f: ScalarField) -> ScalarField:
    """
    Δf = g^{ij̄} ∂_i∂_j̄ f.

    Raises:
        GridMismatchError: f and g on different grids
    """
    require_same_grid(g.grid, f.grid)
    values = np.einsum("ij...,ij...->...", g.inverse, mixed_hessian(f.values, f.grid))
    if f.is_real:
        return ScalarField(f.grid, values.real, is_real=True)
    return ScalarField(f.grid, values)

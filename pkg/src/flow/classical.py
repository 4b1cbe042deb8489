"""
Classical Calabi flow stepper for Kähler data.

Written against the lattice primitives only: the metric, its inverse and
determinant come from numpy.linalg on per-site matrices, and the velocity is
the scalar curvature −g^{ij̄}∂_i∂_j̄ log det g_φ with no torsion term, the
Hessian of log det expanded through per-site matrix inverses. Used as
an independent reference for the Chern-Calabi stepper.
"""

import numpy as np

from ..lattice import Grid
from ..lattice.quadrature import integrate_density
from ..lattice.spectral import antihol_gradient, dealias_array, hol_gradient, mixed_hessian


class ClassicalCalabiStepper:
    """
    RK4 stepper for φ̇ = R(ω0 + i∂∂̄φ) with per-step renormalization.

    Args:
        grid: lattice
        G0: background components (n, n, *grid), Kähler
        dt: time step
    """

    def __init__(self, grid: Grid, G0: np.ndarray, dt: float):
        self.grid = grid
        self.G0 = np.asarray(G0, dtype=np.complex128)
        self.dt = dt

    def _sites(self, values: np.ndarray) -> np.ndarray:
        """Move the lattice axes into one leading site axis."""
        ndim = self.grid.ndim
        return np.moveaxis(values.reshape(values.shape[:-ndim] + (-1,)), -1, 0)

    def determinant(self, phi: np.ndarray) -> np.ndarray:
        G = self.G0 + mixed_hessian(phi, self.grid)
        return np.linalg.det(self._sites(G)).real.reshape(self.grid.shape)

    def scalar_curvature(self, phi: np.ndarray) -> np.ndarray:
        grid = self.grid
        G = self.G0 + mixed_hessian(phi, grid)
        M = self._sites(G)
        dM = self._sites(hol_gradient(G, grid))
        dbM = self._sites(antihol_gradient(G, grid))
        ddbM = self._sites(mixed_hessian(G, grid))
        M_inv = np.linalg.inv(M)
        # ∂_i∂_j̄ log det M = tr(M⁻¹ ∂_i∂_j̄M) − tr(M⁻¹ ∂_iM M⁻¹ ∂_j̄M)
        hessian = (np.einsum("sab,sijba->sij", M_inv, ddbM)
                   - np.einsum("sab,sibc,scd,sjda->sij", M_inv, dM, M_inv, dbM))
        # R = −Σ_ij g^{ij̄} ∂_i∂_j̄ log det with g^{ij̄} = (M⁻¹)[j, i]
        curvature = -np.einsum("sji,sij->s", M_inv, hessian)
        return curvature.real.reshape(grid.shape)

    def velocity(self, phi: np.ndarray) -> np.ndarray:
        return dealias_array(self.scalar_curvature(phi), self.grid).real

    def renormalize(self, phi: np.ndarray) -> np.ndarray:
        det = self.determinant(phi)
        c = integrate_density(phi, det, self.grid).real / integrate_density(1.0, det, self.grid).real
        return phi - c

    def step(self, phi: np.ndarray) -> np.ndarray:
        dt = self.dt
        k1 = self.velocity(phi)
        k2 = self.velocity(phi + 0.5 * dt * k1)
        k3 = self.velocity(phi + 0.5 * dt * k2)
        k4 = self.velocity(phi + dt * k3)
        return self.renormalize(phi + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)

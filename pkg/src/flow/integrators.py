"""
Time integrators for φ̇ = V(φ).

rk4 is the classical explicit scheme. imex treats the constant-coefficient
bi-Laplacian A·Δ₀² implicitly in Fourier space:

    φ̂⁺ = (φ̂ + dt·(V̂ + A·μ·φ̂)) / (1 + dt·A·μ),   μ = (Σ_j α_jβ_j)²

with α_j, β_j the ∂_j, ∂_j̄ symbols. V is expected already dealiased.

The imex step is first order in dt. imex_dt_budget gives the step that
keeps its error on the dissipation rate below a relative tolerance.
"""

import math
from typing import Callable, Optional

import numpy as np

from ..lattice import Grid
from ..lattice.spectral import forward, inverse

Velocity = Callable[[np.ndarray], np.ndarray]

RK4_WEIGHTS = np.array([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
RK4_NODES = np.array([0.5, 0.5, 1.0])
IMEX_BUDGET_TOLERANCE = 1e-4


def rk4_update(phi: np.ndarray, dt: float, velocity: Velocity,
               first_stage: Optional[np.ndarray] = None) -> np.ndarray:
    """
    One classical Runge-Kutta step.

    Args:
        phi: real potential values
        dt: time step
        velocity: V(φ) on real arrays
        first_stage: V(phi) if already evaluated

    Returns:
        φ after one step
    """
    k = first_stage if first_stage is not None else velocity(phi)
    result = phi + RK4_WEIGHTS[0] * dt * k
    for stage in range(3):
        k = velocity(phi + RK4_NODES[stage] * dt * k)
        result = result + RK4_WEIGHTS[stage + 1] * dt * k
    return result


def biharmonic_symbol(grid: Grid) -> np.ndarray:
    """μ = (Σ_j α_jβ_j)², the symbol of Δ₀² for the flat Chern Laplacian Δ₀."""
    return grid.flat_laplacian_symbol ** 2


def imex_update(phi: np.ndarray, dt: float, velocity_value: np.ndarray,
                stabilization: float, grid: Grid) -> np.ndarray:
    """
    One stabilized semi-implicit step.

    Args:
        phi: real potential values
        dt: time step
        velocity_value: V(φ), dealiased
        stabilization: A, at least the square of the largest eigenvalue
            of g_φ⁻¹
        grid: lattice

    Returns:
        φ after one step (real)
    """
    mu = biharmonic_symbol(grid)
    phi_hat = forward(phi, grid)
    v_hat = forward(velocity_value, grid)
    damping = stabilization * mu
    updated = (phi_hat + dt * (v_hat + damping * phi_hat)) / (1.0 + dt * damping)
    return inverse(updated, grid).real


def imex_dt_budget(velocity_value: np.ndarray, stabilization: float, grid: Grid,
                   tolerance: float = IMEX_BUDGET_TOLERANCE) -> float:
    """
    Largest dt whose first-order IMEX error stays within tolerance.

    The stabilized step moves φ by dt·(1 − dt·A·μ + …)·V per mode, so the
    dissipation rate it realizes is off by about dt·A·μ_eff relative, with
    μ_eff the spectral average of μ weighted by |V̂|².

    Args:
        velocity_value: V(φ), dealiased
        stabilization: A used by the step
        grid: lattice
        tolerance: target relative error of the realized dissipation rate

    Returns:
        tolerance / (A·μ_eff); inf for a zero velocity
    """
    weights = np.abs(forward(velocity_value, grid)) ** 2
    total = float(np.sum(weights))
    if total == 0.0 or stabilization == 0.0:
        return math.inf
    mu_eff = float(np.sum(biharmonic_symbol(grid).real * weights)) / total
    if mu_eff == 0.0:
        return math.inf
    return tolerance / (stabilization * mu_eff)

"""
Background data of a flow: the reference metric ω0, its Chern-Ricci
potential F and the volume form Ω = e^F ω0ⁿ.

On the torus the pluriharmonic functions are constants, so F is the
closed form −log det g0 + c with c fixed by ∫e^F ω0ⁿ = ∫ω0ⁿ. Then
log Ω (as a density against the euclidean cell) is the constant c.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..geometry import HermitianMetric, chern_ricci
from ..geometry.metric import i_del_delbar
from ..lattice import ScalarField, integrate
from ..lattice.quadrature import volume_form_constant
from ..lattice.spectral import mixed_hessian

logger = logging.getLogger("chern_flow")


class FunctionalError(ValueError):
    """Energy functional or background cannot be evaluated."""
    pass


@dataclass(frozen=True)
class Background:
    """
    Attributes:
        omega0: reference metric
        F: Chern-Ricci potential, Ric(ω0) = i∂∂̄F
        volume: V = ∫ω0ⁿ
        log_omega_density: log of Ω against the euclidean cell (constant)
    """
    omega0: HermitianMetric
    F: ScalarField
    volume: float
    log_omega_density: ScalarField

    @property
    def grid(self):
        return self.omega0.grid

    @property
    def omega_density(self) -> ScalarField:
        """Ω = e^F ω0ⁿ as a density against the euclidean cell."""
        return ScalarField(self.grid, np.exp(self.log_omega_density.real), is_real=True)


def ricci_potential(omega0: HermitianMetric) -> Background:
    """
    Chern-Ricci potential and normalized volume form of a background metric.

    Args:
        omega0: reference metric

    Returns:
        Background with F = −log det g0 + c

    Raises:
        FunctionalError: normalization constant is not finite
    """
    grid = omega0.grid
    volume = integrate(1.0, omega0).real
    total_cell_weight = volume_form_constant(grid) * grid.size
    ratio = volume / total_cell_weight
    if not (math.isfinite(ratio) and ratio > 0):
        raise FunctionalError(f"non-finite Ricci potential normalization (V={volume})")
    c = math.log(ratio)

    F = ScalarField(grid, -omega0.log_det.real + c, is_real=True)
    log_omega = ScalarField.constant(grid, c)
    logger.debug(f"[Functionals] Background ready: V={volume:.12g}, normalization c={c:.6g}")
    return Background(omega0=omega0, F=F, volume=volume, log_omega_density=log_omega)


def background_residuals(bg: Background) -> Dict[str, float]:
    """
    Residuals of the Background invariants.

    Returns:
        dict with "normalization" (relative), "ricci" (sup |Ric(ω0) − i∂∂̄F|,
        at the aliasing level of F since only i∂∂̄F is taken spectrally) and
        "log_omega_hessian" (sup |i∂∂̄ log Ω|)
    """
    eF = ScalarField(bg.grid, np.exp(bg.F.real), is_real=True)
    normalization = abs(integrate(eF, bg.omega0).real - bg.volume) / bg.volume
    ricci = (chern_ricci(bg.omega0) - i_del_delbar(bg.F)).sup_norm()
    log_omega = float(np.max(np.abs(mixed_hessian(bg.log_omega_density.values, bg.grid))))
    return {"normalization": normalization, "ricci": ricci, "log_omega_hessian": log_omega}

"""
Mabuchi energy, entropy and volume.

All logarithms of volume ratios are taken in log space:
log(ω_φⁿ/Ω) = log det g_φ − log Ω, never by dividing determinants. The
one exception is mabuchi_difference, which needs log1p of a small relative
change in det g.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import HermitianMetric, PositivityError, build_metric, i_del_delbar
from ..lattice import ScalarField, integrate, require_same_grid
from ..lattice.quadrature import integrate_density
from .background import Background, FunctionalError


@dataclass(frozen=True)
class EnergyValues:
    mabuchi: float
    entropy: float
    volume: float


def perturbed_metric(bg: Background, phi: ScalarField) -> HermitianMetric:
    """
    ω_φ = ω0 + i∂∂̄φ as a validated metric.

    Raises:
        FunctionalError: ω_φ is not positive (wraps the PositivityError)
    """
    require_same_grid(bg.grid, phi.grid)
    try:
        return build_metric(bg.omega0.g + i_del_delbar(phi))
    except PositivityError as exc:
        raise FunctionalError(f"ω_φ is not positive: {exc}") from exc


def volume(g: HermitianMetric) -> float:
    """∫ωⁿ under the lattice convention."""
    return integrate(1.0, g).real


def mabuchi_of(bg: Background, g_phi: HermitianMetric) -> float:
    """(1/V)∫ log(ω_φⁿ/Ω) ω_φⁿ + (1/V)∫F ω0ⁿ for an already built ω_φ."""
    log_ratio = g_phi.log_det - bg.log_omega_density
    return (integrate(log_ratio, g_phi).real + integrate(bg.F, bg.omega0).real) / bg.volume


def entropy_of(bg: Background, g_phi: HermitianMetric) -> float:
    """(1/V)∫ log(ω_φⁿ/ω0ⁿ) ω_φⁿ for an already built ω_φ."""
    log_ratio = g_phi.log_det - bg.omega0.log_det
    return integrate(log_ratio, g_phi).real / bg.volume


def energies(bg: Background, g_phi: HermitianMetric) -> EnergyValues:
    return EnergyValues(
        mabuchi=mabuchi_of(bg, g_phi),
        entropy=entropy_of(bg, g_phi),
        volume=volume(g_phi),
    )


def mabuchi(bg: Background, phi: ScalarField) -> float:
    """
    Mabuchi energy of ω_φ relative to the background.

    Mab = (1/V)∫(log(det g_φ/det g0) − F) ω_φⁿ + (1/V)∫F ω0ⁿ; zero at φ = 0.

    Raises:
        FunctionalError: ω_φ not positive
    """
    return mabuchi_of(bg, perturbed_metric(bg, phi))


def entropy(bg: Background, phi: ScalarField) -> float:
    """Ent = (1/V)∫ log(ω_φⁿ/ω0ⁿ) ω_φⁿ, non-negative when volumes agree."""
    return entropy_of(bg, perturbed_metric(bg, phi))


def mabuchi_lower_bound(bg: Background) -> float:
    """−1/e + (1/V)∫F ω0ⁿ, from x log x ≥ −1/e applied to ω_φⁿ/Ω."""
    return -1.0 / math.e + integrate(bg.F, bg.omega0).real / bg.volume


def entropy_mabuchi_gap(bg: Background, phi: ScalarField) -> float:
    """Ent − Mab − (1/V)∫F ω_φⁿ + (1/V)∫F ω0ⁿ; vanishes identically."""
    g_phi = perturbed_metric(bg, phi)
    mean_F_phi = integrate(bg.F, g_phi).real / bg.volume
    mean_F_0 = integrate(bg.F, bg.omega0).real / bg.volume
    return entropy_of(bg, g_phi) - mabuchi_of(bg, g_phi) - mean_F_phi + mean_F_0


def _determinant_change(G_a, dG, n: int):
    """det(G_a + dG) − det(G_a) expanded so no two large terms cancel."""
    if n == 1:
        return dG[0, 0].real
    a, e, b = G_a[0, 0].real, G_a[1, 1].real, G_a[0, 1]
    da, de, db = dG[0, 0].real, dG[1, 1].real, dG[0, 1]
    return (da * e + a * de + da * de
            - (2.0 * (np.conj(b) * db).real + np.abs(db) ** 2))


def mabuchi_difference(bg: Background, g_a: HermitianMetric, g_b: HermitianMetric) -> float:
    """
    Mab(ω_b) − Mab(ω_a) without subtracting the two energies.

    (1/V)∫w_b ω_bⁿ − (1/V)∫w_a ω_aⁿ with w = log(ωⁿ/Ω) is summed as
    (w_b − w_a)·det_b + w_a·(det_b − det_a) site by site, both differences
    taken from G_b − G_a. Stays accurate when the two metrics are one short
    time step apart.
    """
    require_same_grid(g_a.grid, g_b.grid)
    grid = g_a.grid
    delta_det = _determinant_change(g_a.components, g_b.components - g_a.components, grid.n)
    det_a = g_a.det.real
    det_b = det_a + delta_det
    w_a = g_a.log_det.real - bg.log_omega_density.real
    density = np.log1p(delta_det / det_a) * det_b + w_a * delta_det
    return integrate_density(density, 1.0, grid).real / bg.volume

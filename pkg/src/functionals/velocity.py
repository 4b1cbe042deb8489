"""
Flow velocity of the Chern-Calabi flow in potential form:

    φ̇ = R_φ + 2 Re( g_φ^{jk̄} (tr T_φ)_j ∂_k̄ log(ω_φⁿ/Ω) ).

The velocity returned here is the raw pointwise value; the time steppers
dealias it before use.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..geometry import (
    HermitianMetric,
    chern_laplacian,
    chern_ricci,
    chern_scalar,
    torsion_trace,
)
from ..lattice import ScalarField, integrate
from ..lattice.spectral import antihol_gradient
from .background import Background, FunctionalError
from .energy import perturbed_metric

logger = logging.getLogger("chern_flow")


@dataclass(frozen=True)
class VelocityTerms:
    """
    Attributes:
        metric: ω_φ
        scalar_curvature: R_φ
        torsion_term: 2Re(g^{jk̄}(tr T)_j ∂_k̄ w)
        velocity: φ̇ = R_φ + torsion_term
        log_ratio: w = log(ω_φⁿ/Ω)
    """
    metric: HermitianMetric
    scalar_curvature: ScalarField
    torsion_term: ScalarField
    velocity: ScalarField
    log_ratio: ScalarField


def log_volume_ratio(bg: Background, g_phi: HermitianMetric) -> ScalarField:
    """w = log det g_φ − log Ω."""
    return g_phi.log_det - bg.log_omega_density


def evaluate_velocity(bg: Background, phi: ScalarField,
                      g_phi: Optional[HermitianMetric] = None) -> VelocityTerms:
    """
    All terms of the flow velocity at φ.

    Args:
        bg: background data
        phi: real potential
        g_phi: ω_φ if already built

    Raises:
        FunctionalError: ω_φ not positive or velocity not finite
    """
    if g_phi is None:
        g_phi = perturbed_metric(bg, phi)
    grid = g_phi.grid
    w = log_volume_ratio(bg, g_phi)
    R = chern_scalar(g_phi)

    trace = torsion_trace(g_phi)
    dbar_w = antihol_gradient(w.values, grid)
    pairing = np.einsum("jk...,j...,k...->...", g_phi.inverse, trace, dbar_w)
    torsion_term = ScalarField(grid, 2.0 * pairing.real, is_real=True)

    velocity = R + torsion_term
    if not np.all(np.isfinite(velocity.real)):
        raise FunctionalError("flow velocity is not finite")
    return VelocityTerms(
        metric=g_phi,
        scalar_curvature=R,
        torsion_term=torsion_term,
        velocity=velocity,
        log_ratio=w,
    )


def flow_velocity(bg: Background, phi: ScalarField) -> ScalarField:
    """
    φ̇ at φ; real, and equal to chern_scalar(ω_φ) when ω_φ is torsion-free.

    Raises:
        FunctionalError: ω_φ not positive
    """
    return evaluate_velocity(bg, phi).velocity


def mean_velocity(bg: Background, terms: VelocityTerms) -> float:
    """(1/V)∫φ̇ ω_φⁿ."""
    return integrate(terms.velocity, terms.metric).real / bg.volume


def coupled_residual(bg: Background, phi: ScalarField) -> float:
    """
    sup |Δ_φ F₄ + R_φ − tr_{ω_φ} Ric(ω0)| with F₄ = log(ω_φⁿ/ω0ⁿ).

    Three separately computed second-order pipelines; a consistency
    diagnostic. F₄ is differentiated spectrally and the two curvature terms
    through the chain rule, so it sits at the aliasing level of F₄.
    """
    g_phi = perturbed_metric(bg, phi)
    F4 = g_phi.log_det - bg.omega0.log_det
    residual = (
        chern_laplacian(g_phi, F4)
        + chern_scalar(g_phi)
        - g_phi.trace(chern_ricci(bg.omega0)).as_real()
    )
    return residual.sup_norm()


def scalar_curvature_from_potential(bg: Background, phi: ScalarField) -> ScalarField:
    """R_φ = −Δ_φ log(ω_φⁿ/Ω), a second pipeline for the Chern scalar curvature."""
    g_phi = perturbed_metric(bg, phi)
    return -chern_laplacian(g_phi, log_volume_ratio(bg, g_phi))

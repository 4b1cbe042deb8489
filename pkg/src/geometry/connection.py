"""
Chern connection, torsion and covariant derivatives.

Γ^k_{ij} = g^{kp̄} ∂_i g_{jp̄} is stored as Γ[k, i, j]. The covariant
derivative puts the new derivative slot first.

Γ is not band-limited even when g is, so its derivatives are assembled
from ∂g, ∂∂g and ∂(g⁻¹) = −g⁻¹(∂g)g⁻¹ and carried on the tensor instead of
being taken spectrally.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np

from ..lattice.spectral import antihol_gradient, hol_gradient
from .metric import HermitianMetric
from .tensor import MAX_SLOTS, IndexSignature, Slot, SignatureError, TensorField, signature

logger = logging.getLogger("chern_flow")

Direction = Literal["hol", "antihol"]


@dataclass(frozen=True)
class TorsionFields:
    """
    Attributes:
        upper: T^k_{ij} = Γ^k_{ij} − Γ^k_{ji}, signature "Hhh"
        lowered: T_{jkl̄} = ∂_j g_{kl̄} − ∂_k g_{jl̄}, signature "hha"
        trace: (tr T)_j = T^p_{pj}, signature "h"

    All three carry their first derivatives.
    """
    upper: TensorField
    lowered: TensorField
    trace: TensorField


def christoffel_array(g: HermitianMetric) -> np.ndarray:
    return np.einsum("kp...,ijp...->kij...", g.inverse, g.hol_derivative)


def christoffel_jets(g: HermitianMetric) -> Tuple[np.ndarray, np.ndarray]:
    """(∂_m Γ^k_{ij}, ∂_m̄ Γ^k_{ij}) stored as [m, k, i, j]."""
    dH, dbH = g.inverse_derivatives
    dG = g.hol_derivative
    hol = (np.einsum("mkp...,ijp...->mkij...", dH, dG)
           + np.einsum("kp...,mijp...->mkij...", g.inverse, g.hol_hessian))
    antihol = (np.einsum("mkp...,ijp...->mkij...", dbH, dG)
               + np.einsum("kp...,mijp...->mkij...", g.inverse, g.mixed_derivative))
    return hol, antihol


def christoffel(g: HermitianMetric) -> TensorField:
    """Chern connection coefficients Γ^k_{ij}, signature (upper hol; lower hol, hol)."""
    return TensorField(g.grid, signature("Hhh"), christoffel_array(g), christoffel_jets(g))


def torsion_trace(g: HermitianMetric) -> np.ndarray:
    """(tr T)_j = Γ^p_{pj} − Γ^p_{jp} as a bare array, without carried derivatives."""
    gamma = christoffel_array(g)
    return np.einsum("ppj...->j...", gamma) - np.einsum("pjp...->j...", gamma)


def _antisymmetrize(values: np.ndarray, first: int) -> np.ndarray:
    return values - np.swapaxes(values, first, first + 1)


def torsion(g: HermitianMetric) -> TorsionFields:
    """
    Chern torsion in three forms.

    The lowered form is taken from the metric derivatives directly, so it
    is an independent path from Γ for the lowering identity.
    """
    gamma = christoffel(g)
    upper = TensorField(
        g.grid, signature("Hhh"), _antisymmetrize(gamma.components, 1),
        tuple(_antisymmetrize(d, 2) for d in gamma.derivatives),
    )
    lowered = TensorField(
        g.grid, signature("hha"), _antisymmetrize(g.hol_derivative, 0),
        (_antisymmetrize(g.hol_hessian, 1), _antisymmetrize(g.mixed_derivative, 1)),
    )
    return TorsionFields(upper=upper, lowered=lowered, trace=upper.contract(0, 1))


def _connection_terms(components: np.ndarray, sig: IndexSignature, coeff: np.ndarray,
                      acting_kind: str) -> np.ndarray:
    """Sum of the Γ corrections for every slot of acting_kind; derivative slot first."""
    total = np.zeros(coeff.shape[:1] + components.shape, dtype=np.complex128)
    for position, slot in enumerate(sig):
        if slot.kind != acting_kind:
            continue
        moved = np.moveaxis(components, position, 0)
        if slot.position == "lower":
            term = -np.einsum("ris...,r...->is...", coeff, moved)
        else:
            term = np.einsum("sir...,r...->is...", coeff, moved)
        total += np.moveaxis(term, 1, position + 1)
    return total


def _second_partials(values: np.ndarray, grid) -> Tuple[np.ndarray, np.ndarray]:
    return hol_gradient(values, grid), antihol_gradient(values, grid)


def covariant_derivative(g: HermitianMetric, t: TensorField,
                         direction: Direction = "hol") -> TensorField:
    """
    Chern covariant derivative with the derivative slot placed first.

    ∇_i acts on holomorphic slots through Γ (−Γ on lower, +Γ on upper) and
    leaves antiholomorphic slots alone; ∇_ī does the same with conj(Γ) on
    antiholomorphic slots. On a (1,0)-form this is ∇_i a_k = ∂_i a_k −
    Γ^j_{ik} a_j and ∇_ī a_k = ∂_ī a_k.

    The partial derivative comes from t's carried derivatives when it has
    them. A band-limited t without carried derivatives gets a result that
    carries its own, so a second covariant derivative stays exact.

    Args:
        g: metric defining the connection
        t: tensor with at most four slots
        direction: "hol" for ∇_i, "antihol" for ∇_ī

    Returns:
        TensorField with one more lower slot in front

    Raises:
        SignatureError: t already has five slots or direction is unknown
    """
    if direction not in ("hol", "antihol"):
        raise SignatureError(f"unknown derivative direction {direction!r}")
    if t.rank >= MAX_SLOTS:
        raise SignatureError(f"covariant derivative needs at most {MAX_SLOTS - 1} slots, got {t.rank}")
    gamma = christoffel(g)
    hol_jet, antihol_jet = gamma.derivatives
    if direction == "hol":
        coeff = gamma.components
        # ∂_e Γ for e = hol, antihol
        coeff_jets = (hol_jet, antihol_jet)
    else:
        coeff = np.conj(gamma.components)
        coeff_jets = (np.conj(antihol_jet), np.conj(hol_jet))

    partial = t.partial(direction)
    components = partial + _connection_terms(t.components, t.signature, coeff, direction)
    new_signature = t.signature.prepend(Slot(direction, "lower"))
    if t.has_derivatives:
        return TensorField(t.grid, new_signature, components)

    jets = []
    for e, second in enumerate(_second_partials(partial, t.grid)):
        t_partial = t.partial("hol" if e == 0 else "antihol")
        for m in range(t.n):
            second[m] += (_connection_terms(t.components, t.signature, coeff_jets[e][m], direction)
                          + _connection_terms(t_partial[m], t.signature, coeff, direction))
        jets.append(second)
    return TensorField(t.grid, new_signature, components, tuple(jets))


def divergence(g: HermitianMetric, V: TensorField) -> TensorField:
    """∇_i V^i for a holomorphic vector field V (signature "H"); rank-0 result."""
    if V.signature.codes != "H":
        raise SignatureError(f"divergence expects signature 'H', got {V.signature}")
    return covariant_derivative(g, V, "hol").contract(0, 1)


def compatibility_residual(g: HermitianMetric) -> float:
    """
    sup |∇_k g_{ij̄}| and sup |∇_k̄ g_{ij̄}|, whichever is larger.

    Evaluated from the explicit formulas ∂_k g_{ij̄} − Γ^p_{ki} g_{pj̄} and
    ∂_k̄ g_{ij̄} − conj(Γ^q_{kj}) g_{iq̄} rather than the generic derivative.
    """
    gamma = christoffel_array(g)
    G = g.components
    hol = g.hol_derivative - np.einsum("pki...,pj...->kij...", gamma, G)
    antihol = g.antihol_derivative - np.einsum("qkj...,iq...->kij...", np.conj(gamma), G)
    return float(max(np.max(np.abs(hol)), np.max(np.abs(antihol))))

"""
Identity evaluators and the identity suite.

Every evaluator computes the two sides of its identity along separate code
paths and returns the residual. Auxiliary fields (functions, (1,0)-forms,
vector fields, potentials) are drawn from one seeded generator in a fixed
order, so a report is determined by the metric and the seed.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional

import numpy as np

from ..functionals import volume
from ..geometry import (
    HermitianMetric,
    TensorField,
    chern_laplacian,
    chern_ricci,
    compatibility_residual,
    covariant_derivative,
    curvature,
    divergence,
    i_del_delbar,
    is_gauduchon,
    pluriclosed_residual,
    torsion,
)
from ..geometry.curvature import CurvatureFields
from ..geometry.connection import TorsionFields
from ..lattice import ScalarField, fourier_tail, integrate, random_bandlimited, random_complex_bandlimited
from ..metricgen import kahler_perturbation, max_admissible_scale, non_gauduchon_control
from .manifest import register_identity, registered_identities, validate_manifest
from .report import IdentityReport, IdentityResult

logger = logging.getLogger("chern_flow")

VACUOUS_THRESHOLD = 1e-12
CONTROL_THRESHOLD = 1e-4
CONTROL_DELTA = 0.05
VECTOR_FIELD_COUNT = 10
POTENTIAL_COUNT = 20
# Perturbations use half the largest scale that keeps ω + i∂∂̄ψ positive
POSITIVITY_MARGIN = 0.5


@dataclass
class SuiteContext:
    """
    A metric with its auxiliary fields and lazily computed geometry.

    Attributes:
        g: metric under test
        f: real test function
        form: (1,0)-form components, shape (n, *grid)
        vector_fields: holomorphic vector fields V^k, signature "H"
        potentials: real potentials ψ
    """
    g: HermitianMetric
    f: ScalarField
    form: np.ndarray
    vector_fields: List[TensorField] = field(default_factory=list)
    potentials: List[ScalarField] = field(default_factory=list)

    @property
    def grid(self):
        return self.g.grid

    @cached_property
    def torsion(self) -> TorsionFields:
        return torsion(self.g)

    @cached_property
    def curvature(self) -> CurvatureFields:
        return curvature(self.g)

    def admissible(self, psi: ScalarField) -> ScalarField:
        """ψ rescaled so that ω + i∂∂̄ψ stays positive."""
        P = i_del_delbar(psi).components
        bound = max_admissible_scale(self.g.components, P)
        scale = 1.0 if math.isinf(bound) else min(1.0, POSITIVITY_MARGIN * bound)
        return psi * scale

    def sample_functions(self) -> List[ScalarField]:
        """The test function plus cos and sin of the lowest mode along each real axis."""
        grid = self.grid
        functions = [self.f]
        for axis in range(grid.ndim):
            theta = 2.0 * np.pi * grid.coordinate(axis) / grid.L
            for wave in (np.cos(theta), np.sin(theta)):
                functions.append(ScalarField(grid, np.broadcast_to(wave, grid.shape), is_real=True))
        return functions


def draw_context(g: HermitianMetric, seed: int, aux_max_mode: Optional[int] = None) -> SuiteContext:
    """
    Auxiliary fields for one suite run, band-limited to aux_max_mode
    (default ⌊N/4⌋) with unit amplitude.
    """
    grid = g.grid
    if aux_max_mode is None:
        aux_max_mode = max(1, grid.N // 4)
    rng = np.random.default_rng(seed)

    def complex_components() -> np.ndarray:
        return np.stack([random_complex_bandlimited(rng, 1.0, aux_max_mode, grid).values
                         for _ in range(grid.n)])

    f = random_bandlimited(rng, 1.0, aux_max_mode, grid)
    form = complex_components()
    vector_fields = [TensorField(grid, "H", complex_components()) for _ in range(VECTOR_FIELD_COUNT)]
    potentials = [random_bandlimited(rng, 1.0, aux_max_mode, grid) for _ in range(POTENTIAL_COUNT)]
    return SuiteContext(g=g, f=f, form=form, vector_fields=vector_fields, potentials=potentials)


def _sup(values: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values)))


# =============================================================================
# Connection and torsion
# =============================================================================

@register_identity(
    "metric_compatibility",
    "∇_k g_{ij̄} = 0 and ∇_k̄ g_{ij̄} = 0 for the Chern connection",
    tolerance=1e-9,
)
def _metric_compatibility(ctx: SuiteContext) -> float:
    return compatibility_residual(ctx.g)


@register_identity(
    "torsion_antisymmetry",
    "T^k_{ij} = −T^k_{ji}",
    tolerance=1e-12,
    torsion_dependent=True,
)
def _torsion_antisymmetry(ctx: SuiteContext) -> float:
    T = ctx.torsion.upper.components
    return _sup(T + np.swapaxes(T, 1, 2))


@register_identity(
    "torsion_lowering",
    "g_{pl̄} T^p_{jk} = ∂_j g_{kl̄} − ∂_k g_{jl̄}",
    tolerance=1e-9,
    torsion_dependent=True,
)
def _torsion_lowering(ctx: SuiteContext) -> float:
    # lower_index puts the lowered slot first: [l̄, j, k]
    via_connection = ctx.torsion.upper.lower_index(ctx.g, 0).transpose(1, 2, 0)
    return _sup(via_connection.components - ctx.torsion.lowered.components)


@register_identity(
    "torsion_ddbar_invariance",
    "T_{jkl̄} is unchanged by ω ↦ ω + i∂∂̄ψ",
    tolerance=1e-10,
    torsion_dependent=True,
)
def _torsion_ddbar_invariance(ctx: SuiteContext) -> float:
    psi = ctx.admissible(ctx.potentials[0])
    shifted = kahler_perturbation(ctx.g, psi)
    return _sup(torsion(shifted).lowered.components - ctx.torsion.lowered.components)


# =============================================================================
# Curvature
# =============================================================================

@register_identity(
    "curvature_commutation",
    "R_{ij̄k}^p − R_{kj̄i}^p = ∂_j̄ T^p_{ki}",
    tolerance=1e-9,
)
def _curvature_commutation(ctx: SuiteContext) -> float:
    g = ctx.g
    R = ctx.curvature.mixed.components
    swapped = np.einsum("ijkp...->kjip...", R)
    # ∂_j̄ T^p_{ki} = ∂_j̄(g^{pq̄} T_{kiq̄}) arranged as [i, j, k, p]
    _, dbH = g.inverse_derivatives
    lowered = ctx.torsion.lowered
    _, dbT = lowered.derivatives  # [j, k, i, q]
    rhs = (np.einsum("jpq...,kiq...->ijkp...", dbH, lowered.components)
           + np.einsum("pq...,jkiq...->ijkp...", g.inverse, dbT))
    return _sup(R - swapped - rhs)


@register_identity(
    "curvature_conjugation",
    "conj(R_{ij̄kl̄}) = R_{jīlk̄}",
    tolerance=1e-9,
)
def _curvature_conjugation(ctx: SuiteContext) -> float:
    R = ctx.curvature.lowered.components
    return _sup(np.conj(R) - np.einsum("ijkl...->jilk...", R))


@register_identity(
    "ricci_contraction",
    "g^{kl̄} R_{ij̄kl̄} = R_{ij̄} = −∂_i∂_j̄ log det g",
    tolerance=1e-9,
)
def _ricci_contraction(ctx: SuiteContext) -> float:
    contracted = np.einsum("kl...,ijkl...->ij...", ctx.g.inverse, ctx.curvature.lowered.components)
    return _sup(contracted - chern_ricci(ctx.g).components)


# =============================================================================
# Commutation formulae
# =============================================================================

@register_identity(
    "commutation_one_form",
    "[∇_i, ∇_j̄] a_k + R_{ij̄k}^l a_l = 0 for a (1,0)-form a",
    tolerance=1e-9,
)
def _commutation_one_form(ctx: SuiteContext) -> float:
    g = ctx.g
    a = TensorField(ctx.grid, "h", ctx.form)
    hol_first = covariant_derivative(g, covariant_derivative(g, a, "antihol"), "hol")  # [i, j̄, k]
    antihol_first = covariant_derivative(g, covariant_derivative(g, a, "hol"), "antihol")  # [j̄, i, k]
    commutator = hol_first.components - np.swapaxes(antihol_first.components, 0, 1)
    curvature_term = np.einsum("ijkl...,l...->ijk...", ctx.curvature.mixed.components, ctx.form)
    return _sup(commutator + curvature_term)


@register_identity(
    "commutation_scalar",
    "[∇_i, ∇_j] f + T^r_{ij} ∇_r f = 0",
    tolerance=1e-9,
    torsion_dependent=True,
)
def _commutation_scalar(ctx: SuiteContext) -> float:
    g = ctx.g
    first = covariant_derivative(g, TensorField.from_scalar(ctx.f), "hol")
    second = covariant_derivative(g, first, "hol").components
    commutator = second - np.swapaxes(second, 0, 1)
    torsion_term = np.einsum("rij...,r...->ij...", ctx.torsion.upper.components, first.components)
    return _sup(commutator + torsion_term)


@register_identity(
    "commutation_conjugate",
    "[∇_i, ∇_j] ā_k = −T^r_{ij} ∇_r ā_k and [∇_ī, ∇_j̄] a_k = −conj(T^r_{ij}) ∇_r̄ a_k",
    tolerance=1e-9,
    torsion_dependent=True,
)
def _commutation_conjugate(ctx: SuiteContext) -> float:
    g = ctx.g
    T = ctx.torsion.upper.components

    a_bar = TensorField(ctx.grid, "a", np.conj(ctx.form))
    first = covariant_derivative(g, a_bar, "hol")
    second = covariant_derivative(g, first, "hol").components
    hol_residual = (second - np.swapaxes(second, 0, 1)
                    + np.einsum("rij...,rk...->ijk...", T, first.components))

    a = TensorField(ctx.grid, "h", ctx.form)
    first = covariant_derivative(g, a, "antihol")
    second = covariant_derivative(g, first, "antihol").components
    antihol_residual = (second - np.swapaxes(second, 0, 1)
                        + np.einsum("rij...,rk...->ijk...", np.conj(T), first.components))
    return max(_sup(hol_residual), _sup(antihol_residual))


# =============================================================================
# Integral identities
# =============================================================================

@register_identity(
    "divergence_theorem",
    "∫ ∇_i V^i ωⁿ = ∫ (tr T)_i V^i ωⁿ",
    tolerance=1e-9,
    torsion_dependent=True,
)
def _divergence_theorem(ctx: SuiteContext) -> float:
    g = ctx.g
    trace = ctx.torsion.trace.components
    worst = 0.0
    for V in ctx.vector_fields:
        lhs = integrate(ScalarField(ctx.grid, divergence(g, V).components), g)
        pairing = np.einsum("i...,i...->...", trace, V.components)
        rhs = integrate(ScalarField(ctx.grid, pairing), g)
        worst = max(worst, abs(lhs - rhs))
    return worst


@register_identity(
    "gauduchon_integral",
    "∫ Δf ωⁿ = 0 on Gauduchon metrics",
    tolerance=1e-9,
    conditional=True,
)
def _gauduchon_integral(ctx: SuiteContext) -> float:
    return max(abs(integrate(chern_laplacian(ctx.g, h), ctx.g)) for h in ctx.sample_functions())


@register_identity(
    "gauduchon_torsion",
    "g^{jk̄}(∇_k̄(tr T)_j − conj((tr T)_k)(tr T)_j) = 0 on Gauduchon metrics",
    tolerance=1e-8,
    conditional=True,
    torsion_dependent=True,
)
def _gauduchon_torsion(ctx: SuiteContext) -> float:
    g = ctx.g
    trace = ctx.torsion.trace
    derivative = covariant_derivative(g, trace, "antihol").components  # [k̄, j]
    lhs = np.einsum("jk...,kj...->...", g.inverse, derivative)
    rhs = np.einsum("jk...,k...,j...->...", g.inverse, np.conj(trace.components), trace.components)
    return _sup(lhs - rhs)


@register_identity(
    "volume_preservation",
    "|V(ω + i∂∂̄ψ) − V(ω)| / V = 0 on Gauduchon metrics",
    tolerance=1e-10,
    conditional=True,
)
def _volume_preservation(ctx: SuiteContext) -> float:
    g = ctx.g
    V = volume(g)
    worst = 0.0
    for psi in ctx.potentials + ctx.sample_functions()[1:]:
        shifted = kahler_perturbation(g, ctx.admissible(psi))
        worst = max(worst, abs(volume(shifted) - V) / V)
    return worst


# =============================================================================
# Suite
# =============================================================================

validate_manifest()


def _evaluate(spec, ctx: SuiteContext) -> float:
    try:
        return float(spec.evaluate(ctx))
    except Exception as exc:  # failures are report entries
        logger.error(f"[Verify] {spec.name} evaluator failed: {type(exc).__name__}: {exc}")
        return math.nan


def _control_metric(g: HermitianMetric) -> Optional[HermitianMetric]:
    if g.n != 2:
        return None
    delta = min(CONTROL_DELTA, 0.5 * g.min_eigen)
    return non_gauduchon_control(g, delta)


def identity_suite(
    g: HermitianMetric,
    seed: int,
    fingerprint: str = "",
    aux_max_mode: Optional[int] = None,
    force_conditional: bool = False,
) -> IdentityReport:
    """
    Evaluate every manifest identity on g.

    Conditional identities run when g is Gauduchon and are repeated on a
    deliberately non-Gauduchon perturbation of g, which must push the
    residual to at least CONTROL_THRESHOLD. Torsion identities are flagged
    vacuous on torsion-free metrics.

    Args:
        g: metric under test
        seed: seed for the auxiliary fields
        fingerprint: recipe fingerprint recorded in the report
        aux_max_mode: band limit of the auxiliary fields (default ⌊N/4⌋)
        force_conditional: evaluate conditional identities whatever g is
            and skip the controls (negative-control mode, where g itself
            is the broken metric)

    Returns:
        IdentityReport in manifest order; never raises for failing identities
    """
    started = time.perf_counter()
    grid = g.grid
    ctx = draw_context(g, seed, aux_max_mode)
    torsion_sup = ctx.torsion.upper.sup_norm()
    gauduchon = is_gauduchon(g)
    control_ctx: Optional[SuiteContext] = None

    results: List[IdentityResult] = []
    for spec in registered_identities():
        result = IdentityResult(
            name=spec.name,
            description=spec.description,
            residual=math.nan,
            tolerance=spec.tolerance,
            status="pass",
            vacuous=spec.torsion_dependent and torsion_sup < VACUOUS_THRESHOLD,
        )
        if spec.conditional and not gauduchon and not force_conditional:
            result.status = "skipped"
            result.note = f"metric is not Gauduchon (residual {pluriclosed_residual(g):.3e})"
            results.append(result)
            continue

        result.residual = _evaluate(spec, ctx)
        if not result.residual <= spec.tolerance:
            result.status = "fail"

        if spec.conditional and not force_conditional:
            if control_ctx is None and g.n == 2:
                try:
                    control_ctx = draw_context(_control_metric(g), seed, aux_max_mode)
                except Exception as exc:
                    logger.error(f"[Verify] cannot build control metric: {exc}")
            if control_ctx is not None:
                result.control_residual = _evaluate(spec, control_ctx)
                result.control_threshold = CONTROL_THRESHOLD
                result.control_behaved = bool(result.control_residual >= CONTROL_THRESHOLD)
            else:
                result.note = "no non-Gauduchon control in this dimension"
        results.append(result)

    report = IdentityReport(
        fingerprint=fingerprint,
        seed=seed,
        grid=grid.spec.to_dict(),
        results=results,
        resolution=fourier_tail(g.components, grid),
        metadata={
            "torsion_sup": torsion_sup,
            "pluriclosed_residual": pluriclosed_residual(g),
            "gauduchon": gauduchon,
            "force_conditional": force_conditional,
            "aux_max_mode": aux_max_mode if aux_max_mode is not None else max(1, grid.N // 4),
            "wall_time_sec": time.perf_counter() - started,
        },
    )
    failed = [r.name for r in report.failures()]
    if failed:
        logger.warning(f"[Verify] seed={seed}: {len(failed)} identities failed: {', '.join(failed)}")
    else:
        logger.info(f"[Verify] seed={seed}: all identities passed (resolution {report.resolution:.2e})")
    return report

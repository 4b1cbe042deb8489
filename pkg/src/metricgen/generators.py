"""
Deterministic construction of test metrics.

Every generator returns a HermitianMetric that passed build_metric. Random
inputs come from numpy's PCG64 generator seeded by the recipe.
"""

import logging
import math

import numpy as np

from ..geometry import (
    HermitianMetric,
    PositivityError,
    build_metric,
    i_del_delbar,
    identity_components,
    metric_from_components,
    pluriclosed_symbols,
)
from ..lattice import Grid, ScalarField, random_bandlimited, random_complex_bandlimited
from ..lattice.spectral import forward, inverse
from .recipes import MetricRecipe, RecipeError

logger = logging.getLogger("chern_flow")


def _site_matrices(G: np.ndarray) -> np.ndarray:
    """(n, n, *grid) components as a stack of per-site n×n matrices."""
    n = G.shape[0]
    return np.moveaxis(G.reshape(n, n, -1), -1, 0)


def max_admissible_scale(G0: np.ndarray, P: np.ndarray) -> float:
    """
    Largest s with G0 + sP positive definite at every site.

    Args:
        G0: positive Hermitian components (n, n, *grid)
        P: Hermitian perturbation components, same shape

    Returns:
        The bound, or math.inf when every s ≥ 0 is admissible
    """
    L = np.linalg.cholesky(_site_matrices(G0))
    L_inv = np.linalg.inv(L)
    A = L_inv @ _site_matrices(P) @ np.conj(np.swapaxes(L_inv, -1, -2))
    lowest = np.linalg.eigvalsh(0.5 * (A + np.conj(np.swapaxes(A, -1, -2))))[:, 0]
    negative = lowest[lowest < 0]
    if negative.size == 0:
        return math.inf
    return float(np.min(-1.0 / negative))


def _checked_sum(G0: np.ndarray, P: np.ndarray, grid: Grid, what: str) -> HermitianMetric:
    try:
        return metric_from_components(grid, G0 + P)
    except PositivityError as exc:
        safe = max_admissible_scale(G0, P)
        logger.warning(f"[MetricGen] {what} not positive; max admissible scale {safe:.4g}")
        raise PositivityError(
            f"{what} not positive (eigenvalue {exc.eigenvalue:.6g} at site {exc.site}); "
            f"max admissible scaling of the perturbation: {safe:.6g}",
            site=exc.site,
            eigenvalue=exc.eigenvalue,
            safe_scale=safe,
        ) from exc


def flat_metric(grid: Grid) -> HermitianMetric:
    """Identity components: det ≡ 1, no torsion, no curvature."""
    return metric_from_components(grid, identity_components(grid))


def conformal_metric(grid: Grid, u: ScalarField) -> HermitianMetric:
    """
    g = e^u on an elliptic curve (n = 1).

    Raises:
        RecipeError: n ≠ 1 or u not real
    """
    if grid.n != 1:
        raise RecipeError(f"conformal metrics need n=1, got n={grid.n}")
    if not u.is_real:
        raise RecipeError("conformal factor u must be a real field")
    return metric_from_components(grid, np.exp(u.real)[None, None])


def kahler_perturbation(omega0: HermitianMetric, psi: ScalarField) -> HermitianMetric:
    """
    ω0 + i∂∂̄ψ.

    Raises:
        PositivityError: result not positive; carries safe_scale, the
            largest admissible scaling of ψ
    """
    P = i_del_delbar(psi).components
    return _checked_sum(omega0.components, P, omega0.grid, "Kähler perturbation")


def project_pluriclosed(G: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Least-squares projection onto ∂∂̄ω = 0, mode by mode (n = 2).

    Per Fourier mode the unknowns (ĝ₁₁̄, ĝ₂₂̄, ĝ₁₂̄, ĝ₂₁̄) satisfy one linear
    constraint c·u = 0; u ← u − c̄ (c·u)/|c|². The zero mode is free.
    Hermitian structure is preserved and the map is idempotent.

    Args:
        G: components (2, 2, *grid)
        grid: lattice

    Returns:
        Projected, Hermitian-symmetrized components
    """
    if grid.n != 2:
        raise RecipeError(f"pluriclosed projection needs n=2, got n={grid.n}")
    c11, c22, c12, c21 = pluriclosed_symbols(grid)
    norm_sq = np.abs(c11) ** 2 + np.abs(c22) ** 2 + np.abs(c12) ** 2 + np.abs(c21) ** 2
    coeffs = forward(G, grid)
    residual = c11 * coeffs[0, 0] + c22 * coeffs[1, 1] + c12 * coeffs[0, 1] + c21 * coeffs[1, 0]
    weight = np.where(norm_sq > 0, residual / np.where(norm_sq > 0, norm_sq, 1.0), 0.0)

    projected = coeffs.copy()
    projected[0, 0] -= np.conj(c11) * weight
    projected[1, 1] -= np.conj(c22) * weight
    projected[0, 1] -= np.conj(c12) * weight
    projected[1, 0] -= np.conj(c21) * weight

    result = inverse(projected, grid)
    result = 0.5 * (result + np.conj(np.swapaxes(result, 0, 1)))
    return result


def random_pluriclosed(grid: Grid, seed: int, amplitude: float, max_mode: int) -> HermitianMetric:
    """
    Flat metric plus a projected band-limited Hermitian perturbation (n = 2).

    The perturbation has no zero mode and its largest component entry has
    modulus `amplitude`.

    Raises:
        RecipeError: n ≠ 2
        PositivityError: result not positive (carries safe_scale)
    """
    if grid.n != 2:
        raise RecipeError(f"random_pluriclosed needs n=2, got n={grid.n}")
    G0 = identity_components(grid)
    if amplitude == 0.0:
        return flat_metric(grid)

    rng = np.random.default_rng(seed)
    p11 = random_bandlimited(rng, 1.0, max_mode, grid).values
    p22 = random_bandlimited(rng, 1.0, max_mode, grid).values
    p12 = random_complex_bandlimited(rng, 1.0, max_mode, grid).values
    P = np.stack([np.stack([p11, p12]), np.stack([np.conj(p12), p22])])
    P = P - P.mean(axis=grid.field_axes(P.ndim), keepdims=True)

    P = project_pluriclosed(P, grid)
    peak = float(np.max(np.abs(P)))
    if peak == 0.0:
        return flat_metric(grid)
    P = P * (amplitude / peak)

    metric = _checked_sum(G0, P, grid, "random pluriclosed metric")
    logger.debug(f"[MetricGen] random_pluriclosed seed={seed} amplitude={amplitude} "
                 f"max_mode={max_mode}: min_eigen={metric.min_eigen:.4g}")
    return metric


def constant_det_fixture(grid: Grid, epsilon: float, mode: int) -> HermitianMetric:
    """
    g₁₁̄ = g₂₂̄ = 1, g₁₂̄ = ε·exp(2πi m x¹/L): det ≡ 1 − ε², pluriclosed,
    Chern-Ricci-flat and non-Kähler for ε > 0, m ≠ 0.

    Raises:
        RecipeError: n ≠ 2 or ε outside [0, 1)
    """
    if grid.n != 2:
        raise RecipeError(f"constant_det_fixture needs n=2, got n={grid.n}")
    if not 0.0 <= epsilon < 1.0:
        raise RecipeError(f"epsilon must satisfy 0 ≤ ε < 1, got {epsilon}")
    G = identity_components(grid)
    phase = np.exp(2j * np.pi * mode * grid.coordinate(0) / grid.L)
    G[0, 1] = epsilon * np.broadcast_to(phase, grid.shape)
    G[1, 0] = np.conj(G[0, 1])
    return metric_from_components(grid, G)


def non_gauduchon_control(g: HermitianMetric, delta: float) -> HermitianMetric:
    """
    Deliberately broken metric for negative controls: g₁₁̄ += δ·cos(2π x²/L).

    The added term is not pluriclosed; its ∂∂̄ω has sup-norm δπ²/L².

    Raises:
        RecipeError: n ≠ 2
        PositivityError: δ too large for the input metric
    """
    grid = g.grid
    if grid.n != 2:
        raise RecipeError(f"non-Gauduchon control needs n=2, got n={grid.n}")
    P = np.zeros_like(g.components)
    P[0, 0] = delta * np.broadcast_to(np.cos(2.0 * np.pi * grid.coordinate(2) / grid.L), grid.shape)
    return _checked_sum(g.components, P, grid, "non-Gauduchon control")


def profile_field(grid: Grid, recipe: MetricRecipe) -> ScalarField:
    """Scalar perturbation for conformal and kahler recipes."""
    if recipe.profile == "sine":
        x = grid.coordinate(0)
        values = recipe.amplitude * np.sin(2.0 * np.pi * recipe.max_mode * x / grid.L)
        return ScalarField(grid, np.broadcast_to(values, grid.shape), is_real=True)
    return random_bandlimited(recipe.seed, recipe.amplitude, recipe.max_mode, grid)


def build_from_recipe(grid: Grid, recipe: MetricRecipe) -> HermitianMetric:
    """
    Dispatch a recipe to its generator.

    Raises:
        RecipeError: invalid recipe or kind incompatible with the grid
        PositivityError: amplitude beyond the positivity margin
    """
    recipe.validate()
    kind = recipe.kind
    if kind == "flat":
        metric = flat_metric(grid)
    elif kind == "conformal":
        metric = conformal_metric(grid, profile_field(grid, recipe))
    elif kind == "kahler":
        metric = kahler_perturbation(flat_metric(grid), profile_field(grid, recipe))
    elif kind == "random_pluriclosed":
        metric = random_pluriclosed(grid, recipe.seed, recipe.amplitude, recipe.max_mode)
    else:
        metric = constant_det_fixture(grid, recipe.epsilon, recipe.mode)
    logger.info(f"[MetricGen] Built {kind} metric (fingerprint {recipe.fingerprint()[:16]}): "
                f"min_eigen={metric.min_eigen:.4g}")
    return metric

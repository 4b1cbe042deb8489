"""
Hermitian metrics g_{jk̄} on the lattice.

Inverse, determinant and eigenvalue bounds use closed-form 1×1 and 2×2
matrix algebra. The inverse is stored as H[k, j] = g^{kj̄} with
Σ_p g^{kp̄} g_{ip̄} = δ_{ik}.
"""

import logging
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from ..lattice import Grid, ScalarField
from ..lattice import spectral
from ..lattice.spectral import mixed_hessian
from .tensor import GeometryError, TensorField, signature

logger = logging.getLogger("chern_flow")

METRIC_SIGNATURE = "ha"
HERMITIAN_TOLERANCE = 1e-12


class MetricError(GeometryError):
    """Components do not form a Hermitian (1,1) tensor."""
    pass


class PositivityError(GeometryError):
    """
    Metric is not positive definite somewhere.

    Attributes:
        site: lattice multi-index of the worst site
        eigenvalue: smallest eigenvalue found there
        safe_scale: largest admissible scaling of the perturbation, when known
    """

    def __init__(self, message: str, site: Tuple[int, ...], eigenvalue: float,
                 safe_scale: Optional[float] = None):
        super().__init__(message)
        self.site = site
        self.eigenvalue = eigenvalue
        self.safe_scale = safe_scale


def hermitian_eigen_bounds(G: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Pointwise (smallest, largest) eigenvalues of a Hermitian component array."""
    if n == 1:
        a = G[0, 0].real
        return a, a
    a, e = G[0, 0].real, G[1, 1].real
    radius = np.sqrt(((a - e) / 2.0) ** 2 + np.abs(G[0, 1]) ** 2)
    centre = (a + e) / 2.0
    return centre - radius, centre + radius


def hermitian_determinant(G: np.ndarray, n: int) -> np.ndarray:
    if n == 1:
        return G[0, 0].real.copy()
    return G[0, 0].real * G[1, 1].real - np.abs(G[0, 1]) ** 2


def hermitian_inverse(G: np.ndarray, det: np.ndarray, n: int) -> np.ndarray:
    """H with Σ_p H[k, p] G[i, p] = δ_{ik}, i.e. H = (Gᵀ)⁻¹."""
    if n == 1:
        return (1.0 / det)[None, None].astype(np.complex128)
    a, b, c, e = G[0, 0], G[0, 1], G[1, 0], G[1, 1]
    return np.stack([np.stack([e, -c]), np.stack([-b, a])]) / det


class HermitianMetric:
    """
    Validated positive Hermitian metric.

    Built through build_metric; carries the components g_{jk̄}, the cached
    inverse g^{kj̄}, the determinant and the smallest eigenvalue over the
    lattice. Spatial derivatives of the components are computed on first use.
    """

    def __init__(self, g: TensorField, inverse: np.ndarray, det: ScalarField,
                 min_eigen: float, min_eigen_site: Tuple[int, ...], max_eigen: float):
        self.g = g
        self.inverse = inverse
        self.inverse.setflags(write=False)
        self.det = det
        self.min_eigen = min_eigen
        self.min_eigen_site = min_eigen_site
        self.max_eigen = max_eigen

    @property
    def grid(self) -> Grid:
        return self.g.grid

    @property
    def n(self) -> int:
        return self.g.grid.n

    @property
    def components(self) -> np.ndarray:
        return self.g.components

    @property
    def inv(self) -> TensorField:
        """g^{kj̄} as an (upper hol, upper antihol) tensor."""
        return TensorField(self.grid, signature("HA"), self.inverse)

    @cached_property
    def log_det(self) -> ScalarField:
        return ScalarField(self.grid, np.log(self.det.real), is_real=True)

    @cached_property
    def spectrum(self) -> np.ndarray:
        return spectral.forward(self.components, self.grid)

    def _apply(self, *symbols: np.ndarray) -> np.ndarray:
        coeffs = self.spectrum
        for symbol in symbols:
            coeffs = coeffs * symbol
        return spectral.inverse(coeffs, self.grid)

    @cached_property
    def hol_derivative(self) -> np.ndarray:
        """dG[i, j, p] = ∂_i g_{jp̄}."""
        return np.stack([self._apply(alpha) for alpha in self.grid.hol_symbols])

    @cached_property
    def antihol_derivative(self) -> np.ndarray:
        """dbG[i, j, p] = ∂_ī g_{jp̄}."""
        return np.stack([self._apply(beta) for beta in self.grid.antihol_symbols])

    @cached_property
    def hol_hessian(self) -> np.ndarray:
        """[m, i, j, p] = ∂_m∂_i g_{jp̄}."""
        symbols = self.grid.hol_symbols
        return np.stack([np.stack([self._apply(a, b) for b in symbols]) for a in symbols])

    @cached_property
    def mixed_derivative(self) -> np.ndarray:
        """[m, i, j, p] = ∂_m̄∂_i g_{jp̄}."""
        return np.stack([
            np.stack([self._apply(beta, alpha) for alpha in self.grid.hol_symbols])
            for beta in self.grid.antihol_symbols
        ])

    @cached_property
    def inverse_derivatives(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        (∂_m g^{kl̄}, ∂_m̄ g^{kl̄}), derivative index first.

        From ∂(H) = −H (∂Gᵀ) H, so only the band-limited components are
        differentiated spectrally.
        """
        H = self.inverse
        rule = "ka...,mba...,bl...->mkl..."
        return (-np.einsum(rule, H, self.hol_derivative, H),
                -np.einsum(rule, H, self.antihol_derivative, H))

    def trace(self, tensor: TensorField) -> ScalarField:
        """tr_ω of an (h, a) tensor: g^{ij̄} t_{ij̄}."""
        if tensor.signature.codes != METRIC_SIGNATURE:
            raise MetricError(f"trace expects signature 'ha', got {tensor.signature}")
        return ScalarField(self.grid, np.einsum("ij...,ij...->...", self.inverse, tensor.components))

    def __repr__(self) -> str:
        return (f"HermitianMetric(n={self.n}, N={self.grid.N}, "
                f"min_eigen={self.min_eigen:.4g}, det∈[{np.min(self.det.real):.4g}, "
                f"{np.max(self.det.real):.4g}])")


def build_metric(components: TensorField) -> HermitianMetric:
    """
    Validate components and cache inverse, determinant and eigenvalue bounds.

    Args:
        components: lower (hol, antihol) tensor g_{jk̄}

    Returns:
        HermitianMetric with Hermitian-symmetrized components

    Raises:
        MetricError: wrong signature, non-finite or non-Hermitian components
        PositivityError: smallest eigenvalue ≤ 0 at some site
    """
    if components.signature.codes != METRIC_SIGNATURE:
        raise MetricError(f"metric components need signature 'ha', got {components.signature}")
    grid = components.grid
    n = grid.n
    G = components.components
    if not np.all(np.isfinite(G)):
        raise MetricError("metric components contain non-finite values")

    adjoint = np.conj(np.swapaxes(G, 0, 1))
    scale = max(1.0, float(np.max(np.abs(G))))
    asymmetry = float(np.max(np.abs(G - adjoint)))
    if asymmetry > HERMITIAN_TOLERANCE * scale:
        raise MetricError(f"components are not Hermitian: max |g_jk̄ − conj(g_kj̄)| = {asymmetry:.3e}")
    G = 0.5 * (G + adjoint)

    lowest, highest = hermitian_eigen_bounds(G, n)
    flat_index = int(np.argmin(lowest))
    site = tuple(int(i) for i in np.unravel_index(flat_index, grid.shape))
    min_eigen = float(lowest.ravel()[flat_index])
    if min_eigen <= 0.0:
        raise PositivityError(
            f"metric not positive at site {site}: eigenvalue {min_eigen:.6g}",
            site=site,
            eigenvalue=min_eigen,
        )

    det = hermitian_determinant(G, n)
    inverse = hermitian_inverse(G, det, n)
    metric = HermitianMetric(
        g=TensorField(grid, signature(METRIC_SIGNATURE), G),
        inverse=inverse,
        det=ScalarField(grid, det, is_real=True),
        min_eigen=min_eigen,
        min_eigen_site=site,
        max_eigen=float(np.max(highest)),
    )
    logger.debug(f"[Geometry] Metric built: {metric!r}")
    return metric


def metric_from_components(grid: Grid, G: np.ndarray) -> HermitianMetric:
    """build_metric on a raw (n, n, *grid.shape) component array."""
    return build_metric(TensorField(grid, signature(METRIC_SIGNATURE), G))


def identity_components(grid: Grid) -> np.ndarray:
    eye = np.eye(grid.n, dtype=np.complex128)
    return np.broadcast_to(eye.reshape((grid.n, grid.n) + (1,) * grid.ndim),
                           (grid.n, grid.n) + grid.shape).copy()


def i_del_delbar(psi: ScalarField) -> TensorField:
    """
    Components ∂_j∂_k̄ψ of i∂∂̄ψ as an (h, a) tensor.

    For real ψ the result is Hermitian; adding it to metric components gives
    the candidate ω + i∂∂̄ψ.
    """
    return TensorField(psi.grid, signature(METRIC_SIGNATURE), mixed_hessian(psi.values, psi.grid))

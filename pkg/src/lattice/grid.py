"""
Periodic lattice over the flat complex torus.

A complex coordinate z^k = x^k + i y^k occupies two real axes; arrays are
laid out row-major over the real axes in the order (x¹, y¹, x², y²).
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

logger = logging.getLogger("chern_flow")

MIN_POINTS_PER_AXIS = 8
SUPPORTED_DIMENSIONS = (1, 2)


class LatticeError(ValueError):
    """Base exception for lattice errors."""
    pass


class GridError(LatticeError):
    """Grid specification is not admissible."""
    pass


class GridMismatchError(LatticeError):
    """Operands live on different grids."""
    pass


class AxisError(LatticeError):
    """Axis index out of range."""
    pass


@dataclass(frozen=True)
class GridSpec:
    """
    Lattice specification.

    Attributes:
        n: complex dimension (1 or 2)
        points_per_axis: even N >= 8, same on every real axis
        period: edge length L of every real axis
    """
    n: int
    points_per_axis: int
    period: float = 1.0

    def validate(self) -> None:
        """Raise GridError unless n in {1, 2}, N even >= 8 and L > 0."""
        if self.n not in SUPPORTED_DIMENSIONS:
            raise GridError(f"complex dimension must be 1 or 2, got {self.n}")
        N = self.points_per_axis
        if N < MIN_POINTS_PER_AXIS or N % 2 != 0:
            raise GridError(f"N must be even ≥ {MIN_POINTS_PER_AXIS}, got {N}")
        if not (math.isfinite(self.period) and self.period > 0):
            raise GridError(f"period must be positive, got {self.period}")

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "points_per_axis": self.points_per_axis, "period": self.period}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridSpec":
        return cls(
            n=int(data["n"]),
            points_per_axis=int(data["points_per_axis"]),
            period=float(data.get("period", 1.0)),
        )


class Grid:
    """
    Lattice with precomputed spacing, wave numbers and derivative symbols.

    The first-derivative wave numbers have the Nyquist entry set to zero, so
    the discrete ∂ and ∂̄ are antisymmetric matrices and summation by parts
    holds exactly on the grid.
    """

    def __init__(self, spec: GridSpec):
        spec.validate()
        self.spec = spec
        self.n = spec.n
        self.N = spec.points_per_axis
        self.L = float(spec.period)
        self.h = self.L / self.N
        self.ndim = 2 * self.n
        self.shape: Tuple[int, ...] = (self.N,) * self.ndim
        self.size = self.N ** self.ndim

        # Integer modes in the symmetric range -N/2 .. N/2-1
        self.modes = np.rint(np.fft.fftfreq(self.N, d=1.0 / self.N)).astype(np.int64)
        self.wavenumbers = 2.0 * np.pi * self.modes / self.L
        derivative_k = self.wavenumbers.copy()
        derivative_k[self.N // 2] = 0.0
        self._derivative_k = derivative_k

        self.dealias_limit = self.N // 3

        axis_k = [self._along_axis(derivative_k, a) for a in range(self.ndim)]
        self.hol_symbols = tuple(
            0.5 * (1j * axis_k[2 * j] + axis_k[2 * j + 1]) for j in range(self.n)
        )
        self.antihol_symbols = tuple(
            0.5 * (1j * axis_k[2 * j] - axis_k[2 * j + 1]) for j in range(self.n)
        )
        self.real_axis_symbols = tuple(1j * k for k in axis_k)

        laplacian = np.zeros((1,) * self.ndim)
        for alpha, beta in zip(self.hol_symbols, self.antihol_symbols):
            laplacian = laplacian + (alpha * beta).real
        self.flat_laplacian_symbol = laplacian

        keep = np.abs(self.modes) <= self.dealias_limit
        mask = np.ones((1,) * self.ndim, dtype=bool)
        for a in range(self.ndim):
            mask = mask & self._along_axis(keep, a)
        self.dealias_mask = np.broadcast_to(mask, self.shape)

    def _along_axis(self, vector: np.ndarray, axis: int) -> np.ndarray:
        shape = [1] * self.ndim
        shape[axis] = self.N
        return vector.reshape(shape)

    def field_axes(self, ndim_total: int) -> Tuple[int, ...]:
        """Trailing array axes that carry the lattice for an array of ndim_total dims."""
        return tuple(range(ndim_total - self.ndim, ndim_total))

    def coordinate(self, axis: int) -> np.ndarray:
        """Coordinate values along a real axis, broadcastable to the grid shape."""
        if not 0 <= axis < self.ndim:
            raise AxisError(f"real axis {axis} out of range for {self.ndim} axes")
        return self._along_axis(np.arange(self.N) * self.h, axis)

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """All real coordinates (x¹, y¹[, x², y²]) broadcast to the full grid."""
        return tuple(np.broadcast_to(self.coordinate(a), self.shape) for a in range(self.ndim))

    def check_complex_axis(self, k: int) -> int:
        """Validate a 1-based complex axis index and return it 0-based."""
        if not 1 <= k <= self.n:
            raise AxisError(f"complex axis {k} out of range 1..{self.n}")
        return k - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Grid) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"Grid(n={self.n}, N={self.N}, L={self.L})"


def make_grid(spec: GridSpec) -> Grid:
    """
    Build a lattice from its specification.

    Args:
        spec: grid specification

    Returns:
        Grid with precomputed wave numbers 2πm/L per axis

    Raises:
        GridError: odd N, N < 8, unsupported n or non-positive period
    """
    grid = Grid(spec)
    logger.debug(f"[Lattice] Grid ready: n={grid.n}, N={grid.N}, L={grid.L}, sites={grid.size}")
    return grid


def require_same_grid(*grids: Grid) -> Grid:
    """Return the common grid or raise GridMismatchError."""
    first = grids[0]
    for other in grids[1:]:
        if other != first:
            raise GridMismatchError(f"grid mismatch: {first!r} vs {other!r}")
    return first

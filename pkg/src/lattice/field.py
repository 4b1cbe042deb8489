"""
Scalar fields sampled on the lattice.
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .grid import Grid, LatticeError, require_same_grid

# Imaginary parts above this (relative to the real scale) mean a producing
# operation handed complex data to a real field.
REAL_FLAG_TOLERANCE = 1e-6

Number = Union[int, float, complex]


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Complex value per lattice site, row-major over the real axes.

    Values are copied on construction and frozen. A field flagged real has
    its imaginary part set to exactly zero.
    """
    grid: Grid
    values: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != self.grid.shape:
            raise LatticeError(
                f"field shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        if self.is_real:
            scale = max(1.0, float(np.max(np.abs(values.real))))
            leak = float(np.max(np.abs(values.imag)))
            if leak > REAL_FLAG_TOLERANCE * scale:
                raise LatticeError(f"field flagged real has imaginary part {leak:.3e}")
            values = values.real.astype(np.complex128)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape), is_real=True)

    @classmethod
    def constant(cls, grid: Grid, value: Number) -> "ScalarField":
        return cls(grid, np.full(grid.shape, value, dtype=np.complex128),
                   is_real=bool(np.isreal(value)))

    @classmethod
    def from_function(
        cls,
        grid: Grid,
        fn: Callable[..., np.ndarray],
        is_real: bool = False,
    ) -> "ScalarField":
        """Sample fn(x¹, y¹[, x², y²]) on the grid."""
        values = np.broadcast_to(fn(*grid.coordinates()), grid.shape)
        return cls(grid, values, is_real=is_real)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def ravel(self) -> np.ndarray:
        """Site-major (C order) flat view of the values."""
        return self.values.ravel()

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def conj(self) -> "ScalarField":
        return ScalarField(self.grid, np.conj(self.values), is_real=self.is_real)

    def as_real(self) -> "ScalarField":
        """Same values flagged real (imaginary part dropped)."""
        return ScalarField(self.grid, self.values, is_real=True)

    def _operand(self, other):
        if isinstance(other, ScalarField):
            require_same_grid(self.grid, other.grid)
            return other.values, other.is_real
        return other, bool(np.isrealobj(other))

    def __add__(self, other) -> "ScalarField":
        values, real = self._operand(other)
        return ScalarField(self.grid, self.values + values, is_real=self.is_real and real)

    __radd__ = __add__

    def __sub__(self, other) -> "ScalarField":
        values, real = self._operand(other)
        return ScalarField(self.grid, self.values - values, is_real=self.is_real and real)

    def __rsub__(self, other) -> "ScalarField":
        values, real = self._operand(other)
        return ScalarField(self.grid, values - self.values, is_real=self.is_real and real)

    def __mul__(self, other) -> "ScalarField":
        values, real = self._operand(other)
        return ScalarField(self.grid, self.values * values, is_real=self.is_real and real)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScalarField":
        values, real = self._operand(other)
        return ScalarField(self.grid, self.values / values, is_real=self.is_real and real)

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.values, is_real=self.is_real)

    def __repr__(self) -> str:
        kind = "real" if self.is_real else "complex"
        return f"ScalarField({kind}, {self.grid!r}, sup={self.sup_norm():.3e})"

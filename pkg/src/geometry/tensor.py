"""
Indexed tensor fields on the lattice.

Components are stored component-major: shape (n,)*rank + grid.shape. Slot
codes used throughout the package:

    h  lower holomorphic        a  lower antiholomorphic
    H  upper holomorphic        A  upper antiholomorphic

so the metric g_{jk̄} is "ha", Γ^k_{ij} is "Hhh" and R_{ij̄k}^p is "hahH".

A tensor may carry its exact first derivatives (hol and antihol, derivative
index first). Tensors without them are differentiated spectrally, which is
exact only for band-limited components.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Literal, Optional, Tuple

import numpy as np

from ..lattice import Grid, ScalarField, require_same_grid
from ..lattice.spectral import antihol_gradient, hol_gradient

if TYPE_CHECKING:
    from .metric import HermitianMetric

MAX_SLOTS = 5


class GeometryError(ValueError):
    """Base exception for geometry errors."""
    pass


class SignatureError(GeometryError):
    """Index signature not supported by an operation."""
    pass


@dataclass(frozen=True)
class Slot:
    kind: Literal["hol", "antihol"]
    position: Literal["upper", "lower"]

    @property
    def code(self) -> str:
        letter = "h" if self.kind == "hol" else "a"
        return letter.upper() if self.position == "upper" else letter

    @classmethod
    def from_code(cls, code: str) -> "Slot":
        if code not in ("h", "a", "H", "A"):
            raise SignatureError(f"unknown slot code {code!r}")
        kind = "hol" if code.lower() == "h" else "antihol"
        position = "upper" if code.isupper() else "lower"
        return cls(kind, position)

    def conjugate(self) -> "Slot":
        return Slot("antihol" if self.kind == "hol" else "hol", self.position)

    def flipped(self) -> "Slot":
        """Slot produced by raising or lowering with the metric."""
        return Slot(
            "antihol" if self.kind == "hol" else "hol",
            "lower" if self.position == "upper" else "upper",
        )


@dataclass(frozen=True)
class IndexSignature:
    """Ordered index slots, at most five."""
    slots: Tuple[Slot, ...]

    def __post_init__(self):
        if len(self.slots) > MAX_SLOTS:
            raise SignatureError(f"at most {MAX_SLOTS} slots, got {len(self.slots)}")

    @classmethod
    def parse(cls, codes: str) -> "IndexSignature":
        return cls(tuple(Slot.from_code(c) for c in codes))

    @property
    def codes(self) -> str:
        return "".join(slot.code for slot in self.slots)

    @property
    def rank(self) -> int:
        return len(self.slots)

    def conjugate(self) -> "IndexSignature":
        return IndexSignature(tuple(slot.conjugate() for slot in self.slots))

    def replace(self, position: int, slot: Slot) -> "IndexSignature":
        slots = list(self.slots)
        slots[position] = slot
        return IndexSignature(tuple(slots))

    def without(self, *positions: int) -> "IndexSignature":
        return IndexSignature(tuple(s for i, s in enumerate(self.slots) if i not in positions))

    def prepend(self, slot: Slot) -> "IndexSignature":
        return IndexSignature((slot,) + self.slots)

    def __iter__(self) -> Iterator[Slot]:
        return iter(self.slots)

    def __getitem__(self, position: int) -> Slot:
        return self.slots[position]

    def __str__(self) -> str:
        return self.codes


def signature(codes: str) -> IndexSignature:
    """Shorthand for IndexSignature.parse."""
    return IndexSignature.parse(codes)


Derivatives = Tuple[np.ndarray, np.ndarray]


def _frozen(values: np.ndarray, shape: Tuple[int, ...], what: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != shape:
        raise SignatureError(f"{what} shape {array.shape} does not match {shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TensorField:
    """
    Tensor field with an index signature.

    Attributes:
        grid: lattice the components live on
        signature: slot kinds and positions
        components: complex array of shape (n,)*rank + grid.shape (frozen)
        derivatives: optional exact (∂_m t, ∂_m̄ t), each with the
            derivative index m in front of the component shape
    """
    grid: Grid
    signature: IndexSignature
    components: np.ndarray
    derivatives: Optional[Derivatives] = None

    def __post_init__(self):
        if isinstance(self.signature, str):
            object.__setattr__(self, "signature", IndexSignature.parse(self.signature))
        expected = (self.grid.n,) * self.signature.rank + self.grid.shape
        components = _frozen(self.components, expected, f"components for signature {self.signature}")
        object.__setattr__(self, "components", components)
        if self.derivatives is not None:
            hol, antihol = self.derivatives
            jet_shape = (self.grid.n,) + expected
            object.__setattr__(self, "derivatives", (
                _frozen(hol, jet_shape, "holomorphic derivative"),
                _frozen(antihol, jet_shape, "antiholomorphic derivative"),
            ))

    @classmethod
    def zeros(cls, grid: Grid, sig: str) -> "TensorField":
        parsed = IndexSignature.parse(sig)
        return cls(grid, parsed, np.zeros((grid.n,) * parsed.rank + grid.shape))

    @classmethod
    def from_scalar(cls, f: ScalarField) -> "TensorField":
        """Rank-0 tensor wrapping a scalar field."""
        return cls(f.grid, IndexSignature(()), f.values)

    @property
    def rank(self) -> int:
        return self.signature.rank

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def has_derivatives(self) -> bool:
        return self.derivatives is not None

    def partial(self, direction: Literal["hol", "antihol"]) -> np.ndarray:
        """
        ∂_m t or ∂_m̄ t with m in front.

        Uses the carried derivatives when present, spectral differentiation
        of the components otherwise.
        """
        if self.derivatives is not None:
            return self.derivatives[0 if direction == "hol" else 1]
        if direction == "hol":
            return hol_gradient(self.components, self.grid)
        return antihol_gradient(self.components, self.grid)

    def without_derivatives(self) -> "TensorField":
        return TensorField(self.grid, self.signature, self.components)

    def component(self, *index: int) -> ScalarField:
        """Component at a 0-based multi-index."""
        if len(index) != self.rank:
            raise SignatureError(f"expected {self.rank} indices, got {len(index)}")
        return ScalarField(self.grid, self.components[index])

    def sup_norm(self) -> float:
        if self.components.size == 0:
            return 0.0
        return float(np.max(np.abs(self.components)))

    def conjugate(self) -> "TensorField":
        """Complex conjugate; each slot switches kind, positions stay."""
        derivatives = None
        if self.derivatives is not None:
            hol, antihol = self.derivatives
            derivatives = (np.conj(antihol), np.conj(hol))
        return TensorField(self.grid, self.signature.conjugate(), np.conj(self.components), derivatives)

    def transpose(self, *order: int) -> "TensorField":
        """Permute slots: result slot i is input slot order[i]."""
        if sorted(order) != list(range(self.rank)):
            raise SignatureError(f"invalid slot permutation {order} for rank {self.rank}")
        grid_axes = tuple(range(self.rank, self.components.ndim))
        components = np.transpose(self.components, tuple(order) + grid_axes)
        derivatives = None
        if self.derivatives is not None:
            jet_axes = (0,) + tuple(i + 1 for i in order) + tuple(a + 1 for a in grid_axes)
            derivatives = tuple(np.transpose(d, jet_axes) for d in self.derivatives)
        slots = tuple(self.signature[i] for i in order)
        return TensorField(self.grid, IndexSignature(slots), components, derivatives)

    def contract(self, first: int, second: int) -> "TensorField":
        """
        Trace over two slots of the same kind, one upper and one lower.

        Raises:
            SignatureError: slots not a matching upper/lower pair
        """
        a, b = self.signature[first], self.signature[second]
        if first == second or a.kind != b.kind or a.position == b.position:
            raise SignatureError(
                f"cannot contract slots {first} ({a.code}) and {second} ({b.code})"
            )
        components = np.trace(self.components, axis1=first, axis2=second)
        derivatives = None
        if self.derivatives is not None:
            derivatives = tuple(np.trace(d, axis1=first + 1, axis2=second + 1) for d in self.derivatives)
        return TensorField(self.grid, self.signature.without(first, second), components, derivatives)

    def lower_index(self, g: "HermitianMetric", position: int) -> "TensorField":
        """
        Lower an upper slot with g_{kl̄}; the slot switches kind.

        V^k becomes V_l̄ = g_{kl̄}V^k and W^l̄ becomes W_k = g_{kl̄}W^l̄.
        Carried derivatives are dropped.
        """
        slot = self.signature[position]
        if slot.position != "upper":
            raise SignatureError(f"slot {position} ({slot.code}) is not upper")
        require_same_grid(self.grid, g.grid)
        moved = np.moveaxis(self.components, position, 0)
        if slot.kind == "hol":
            lowered = np.einsum("kl...,k...->l...", g.components, moved)
        else:
            lowered = np.einsum("kl...,l...->k...", g.components, moved)
        components = np.moveaxis(lowered, 0, position)
        return TensorField(self.grid, self.signature.replace(position, slot.flipped()), components)

    def raise_index(self, g: "HermitianMetric", position: int) -> "TensorField":
        """
        Raise a lower slot with g^{ij̄}; the slot switches kind.

        a_i becomes a^j̄ = g^{ij̄}a_i and b_j̄ becomes b^i = g^{ij̄}b_j̄.
        Carried derivatives are dropped.
        """
        slot = self.signature[position]
        if slot.position != "lower":
            raise SignatureError(f"slot {position} ({slot.code}) is not lower")
        require_same_grid(self.grid, g.grid)
        moved = np.moveaxis(self.components, position, 0)
        if slot.kind == "hol":
            raised = np.einsum("ij...,i...->j...", g.inverse, moved)
        else:
            raised = np.einsum("ij...,j...->i...", g.inverse, moved)
        components = np.moveaxis(raised, 0, position)
        return TensorField(self.grid, self.signature.replace(position, slot.flipped()), components)

    def _like(self, other: "TensorField") -> None:
        require_same_grid(self.grid, other.grid)
        if other.signature != self.signature:
            raise SignatureError(f"signature mismatch: {self.signature} vs {other.signature}")

    def _combine(self, other: "TensorField", sign: float) -> "TensorField":
        self._like(other)
        derivatives = None
        if self.derivatives is not None and other.derivatives is not None:
            derivatives = tuple(a + sign * b for a, b in zip(self.derivatives, other.derivatives))
        return TensorField(self.grid, self.signature,
                           self.components + sign * other.components, derivatives)

    def __add__(self, other: "TensorField") -> "TensorField":
        return self._combine(other, 1.0)

    def __sub__(self, other: "TensorField") -> "TensorField":
        return self._combine(other, -1.0)

    def __mul__(self, scalar) -> "TensorField":
        if isinstance(scalar, ScalarField):
            require_same_grid(self.grid, scalar.grid)
            return TensorField(self.grid, self.signature, self.components * scalar.values)
        derivatives = None
        if self.derivatives is not None:
            derivatives = tuple(d * scalar for d in self.derivatives)
        return TensorField(self.grid, self.signature, self.components * scalar, derivatives)

    __rmul__ = __mul__

    def __neg__(self) -> "TensorField":
        return self * -1.0

    def __repr__(self) -> str:
        return f"TensorField({self.signature}, {self.grid!r}, sup={self.sup_norm():.3e})"

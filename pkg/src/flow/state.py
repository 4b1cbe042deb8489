"""
Flow state, diagnostics records and aborts.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

from ..functionals import Background
from ..geometry import HermitianMetric
from ..lattice import ScalarField

# Column contract of the trajectory CSV
CSV_COLUMNS: Tuple[str, ...] = (
    "t", "mab", "ent", "sup_r", "l2_r", "f", "volume",
    "min_eigen", "pluriclosed_residual", "renorm_correction",
)


@dataclass(frozen=True)
class FlowState:
    """
    Attributes:
        t: flow time
        phi: real potential, normalized so (1/V)∫φ ω_φⁿ = 0
        bg: background data
        metric: ω_φ
        step: number of steps taken since t = 0
        renorm_correction: |c| removed by the last renormalization
    """
    t: float
    phi: ScalarField
    bg: Background
    metric: HermitianMetric
    step: int = 0
    renorm_correction: float = 0.0


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mab: float
    ent: float
    sup_r: float
    l2_r: float
    f: float
    volume: float
    min_eigen: float
    pluriclosed_residual: float
    renorm_correction: float
    mean_velocity: float = 0.0
    step: int = 0

    def csv_row(self) -> Tuple[float, ...]:
        return tuple(getattr(self, column) for column in CSV_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class FlowAbort(Exception):
    """
    Flow stopped abnormally.

    Attributes:
        reason: "degeneracy" or "non_finite"
        state: last valid FlowState
    """

    def __init__(self, reason: str, message: str, state: FlowState):
        super().__init__(message)
        self.reason = reason
        self.state = state

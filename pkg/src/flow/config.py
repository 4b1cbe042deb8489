"""
Flow configuration.

C_CFL bounds the explicit step: rk4 needs dt ≤ C_CFL·h⁴ for the fourth-order
parabolic operator. The semi-implicit scheme takes steps orders of
magnitude larger, but it is first order: a run meant to resolve the energy
dissipation rate to a relative ε needs dt ≤ ε/(A·μ_eff), which
flow.integrators.imex_dt_budget evaluates for the current velocity.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Literal, Optional

from ..lattice import Grid

C_CFL = 0.1
INTEGRATORS = ("rk4", "imex")

Integrator = Literal["rk4", "imex"]


class FlowConfigError(ValueError):
    """Flow configuration violates its invariants."""
    pass


@dataclass(frozen=True)
class FlowConfig:
    """
    Attributes:
        integrator: "rk4" (reference) or "imex" (stabilized, default)
        dt: time step (> 0)
        t_max: stop once t reaches this
        max_steps: stop after this many steps
        scalar_curv_tol: stop when ‖R_φ‖∞ falls below
        min_eigen_guard: abort when min eigenvalue of ω_φ is at or below
        stabilization: lower bound for the implicit coefficient A (imex)
        record_every: diagnostics cadence in steps
        initial_amplitude: sup-norm of the initial potential (0 → φ₀ = 0)
        initial_seed: seed of the initial potential
        initial_max_mode: band limit of the initial potential
    """
    integrator: Integrator = "imex"
    dt: float = 1e-3
    t_max: float = 10.0
    max_steps: int = 1000
    scalar_curv_tol: float = 1e-6
    min_eigen_guard: float = 1e-3
    stabilization: float = 1.0
    record_every: int = 1
    initial_amplitude: float = 0.0
    initial_seed: int = 0
    initial_max_mode: int = 1

    def validate(self, grid: Optional[Grid] = None) -> None:
        """
        Raises:
            FlowConfigError: any invariant violated; with a grid, also the
                rk4 bound dt ≤ C_CFL·h⁴
        """
        if self.integrator not in INTEGRATORS:
            raise FlowConfigError(f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise FlowConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_max > 0:
            raise FlowConfigError(f"t_max must be positive, got {self.t_max}")
        if self.max_steps < 0:
            raise FlowConfigError(f"max_steps must be ≥ 0, got {self.max_steps}")
        if self.record_every < 1:
            raise FlowConfigError(f"record_every must be ≥ 1, got {self.record_every}")
        if self.scalar_curv_tol < 0 or self.min_eigen_guard < 0 or self.stabilization < 0:
            raise FlowConfigError("tolerances, guard and stabilization must be non-negative")
        if self.initial_amplitude < 0:
            raise FlowConfigError(f"initial_amplitude must be ≥ 0, got {self.initial_amplitude}")
        if grid is not None and self.integrator == "rk4":
            bound = C_CFL * grid.h ** 4
            if self.dt > bound:
                raise FlowConfigError(
                    f"rk4 needs dt ≤ {C_CFL}·h⁴ = {bound:.3e} (h = {grid.h:.4g}), got {self.dt}"
                )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlowConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})

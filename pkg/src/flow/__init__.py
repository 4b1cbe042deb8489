"""
Time integration of the Chern-Calabi flow in potential form.
"""

from .classical import ClassicalCalabiStepper
from .config import C_CFL, INTEGRATORS, FlowConfig, FlowConfigError
from .integrators import IMEX_BUDGET_TOLERANCE, imex_dt_budget
from .runner import (
    RunResult,
    diagnostics,
    initial_state,
    renormalize,
    run,
    run_from_state,
    step,
    uniqueness_check,
)
from .state import CSV_COLUMNS, DiagnosticsRecord, FlowAbort, FlowState

__all__ = [
    "CSV_COLUMNS",
    "C_CFL",
    "ClassicalCalabiStepper",
    "DiagnosticsRecord",
    "FlowAbort",
    "FlowConfig",
    "FlowConfigError",
    "FlowState",
    "IMEX_BUDGET_TOLERANCE",
    "INTEGRATORS",
    "RunResult",
    "diagnostics",
    "imex_dt_budget",
    "initial_state",
    "renormalize",
    "run",
    "run_from_state",
    "step",
    "uniqueness_check",
]

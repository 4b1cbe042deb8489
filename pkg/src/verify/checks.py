"""
Flow-level checks: the gradient-flow identity dMab/dt = −f and the
reduction to the classical Calabi flow on Kähler data.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..flow import (
    C_CFL,
    IMEX_BUDGET_TOLERANCE,
    ClassicalCalabiStepper,
    FlowConfig,
    FlowState,
    imex_dt_budget,
    initial_state,
    run_from_state,
    step,
)
from ..functionals import (
    evaluate_velocity,
    mabuchi_difference,
    ricci_potential,
    scalar_curvature_from_potential,
)
from ..geometry import HermitianMetric, chern_scalar
from ..lattice import Grid, ScalarField, dealias, integrate
from ..metricgen import MetricRecipe, build_from_recipe, conformal_metric

logger = logging.getLogger("chern_flow")

# Below this f the slope comparison is dominated by rounding
F_FLOOR = 1e-8
DEFAULT_SAMPLES = 10


@dataclass
class EnergyCheckReport:
    """
    Attributes:
        max_relative_error: max |dMab/dt + f| / f over the sampled states
            with f above F_FLOOR; dMab/dt is a centered difference over two
            imex steps of the budgeted size taken from the sampled state
        max_mab_increase: largest increase of Mab between consecutive
            records of the run
        max_abs_mean_velocity: max |(1/V)∫φ̇ ω_φⁿ| over the records
        curvature_pipeline_gap: sup |R_φ − (−Δ_φ log(ω_φⁿ/Ω))| at the final state
        points: number of sampled states compared
        min_budget_dt: smallest budgeted step used
        stop_reason: how the run ended
    """
    max_relative_error: float
    max_mab_increase: float
    max_abs_mean_velocity: float
    curvature_pipeline_gap: float
    points: int
    min_budget_dt: float
    stop_reason: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ReductionReport:
    """
    Attributes:
        deviations: max |φ_chern − φ_classical| after each step
        dt: time step used by both steppers
    """
    deviations: List[float] = field(default_factory=list)
    dt: float = 0.0

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"deviations": self.deviations, "dt": self.dt, "max_deviation": self.max_deviation}


def _dissipation(state: FlowState) -> float:
    v = evaluate_velocity(state.bg, state.phi, state.metric).velocity
    return integrate(v * v, state.metric).real / state.bg.volume


def local_slope_error(state: FlowState, cfg: FlowConfig,
                      tolerance: float = IMEX_BUDGET_TOLERANCE) -> Optional[Tuple[float, float]]:
    """
    Relative error of the centered Mabuchi slope against −f around a state.

    Takes two imex steps of the budgeted size from state and compares
    (Mab(s₂) − Mab(s₀))/(2dt) with −f(s₁).

    Returns:
        (relative error, dt used), or None when f(s₁) is at or below F_FLOOR
    """
    grid = state.bg.grid
    terms = evaluate_velocity(state.bg, state.phi, state.metric)
    A = max(cfg.stabilization, 1.0 / state.metric.min_eigen ** 2)
    dt = imex_dt_budget(dealias(terms.velocity).real, A, grid, tolerance)
    if not math.isfinite(dt):
        return None
    local = replace(cfg, integrator="imex", dt=min(dt, cfg.dt))
    middle = step(state, local, terms)
    end = step(middle, local)
    f = _dissipation(middle)
    if f <= F_FLOOR:
        return None
    slope = mabuchi_difference(state.bg, state.metric, end.metric) / (2.0 * local.dt)
    return abs(slope + f) / f, local.dt


def energy_derivative_check(recipe: MetricRecipe, cfg: FlowConfig, grid: Grid,
                            samples: int = DEFAULT_SAMPLES,
                            tolerance: float = IMEX_BUDGET_TOLERANCE) -> EnergyCheckReport:
    """
    Run the flow and compare the Mabuchi slope with −f along the way.

    The run itself uses cfg. At the initial state and at `samples` evenly
    spaced states of the trajectory the slope is measured with
    local_slope_error, so the comparison is not limited by the run's dt.

    Raises:
        FlowConfigError, RecipeError, PositivityError: as flow.run
    """
    cfg.validate(grid)
    bg = ricci_potential(build_from_recipe(grid, recipe))
    start = initial_state(bg, cfg)
    sampled: List[FlowState] = [start]
    every = max(1, cfg.max_steps // max(1, samples))
    result = run_from_state(start, cfg, on_checkpoint=sampled.append, checkpoint_every=every)

    errors, budgets = [], []
    for state in sampled:
        measured = local_slope_error(state, cfg, tolerance)
        if measured is None:
            continue
        errors.append(measured[0])
        budgets.append(measured[1])

    final = result.final_state
    gap = (chern_scalar(final.metric) - scalar_curvature_from_potential(final.bg, final.phi)).sup_norm()
    report = EnergyCheckReport(
        max_relative_error=max(errors, default=0.0),
        max_mab_increase=result.max_mab_increase(),
        max_abs_mean_velocity=max((abs(r.mean_velocity) for r in result.records), default=0.0),
        curvature_pipeline_gap=gap,
        points=len(errors),
        min_budget_dt=min(budgets, default=0.0),
        stop_reason=result.stop_reason,
    )
    logger.info(f"[Verify] Energy check: rel_err={report.max_relative_error:.3e} over {report.points} "
                f"points (dt ≥ {report.min_budget_dt:.3e}), mab_increase={report.max_mab_increase:.3e}, "
                f"mean_velocity={report.max_abs_mean_velocity:.3e}")
    return report


def calabi_reduction_check(
    u: Optional[ScalarField],
    steps: int,
    dt: Optional[float] = None,
    omega0: Optional[HermitianMetric] = None,
) -> ReductionReport:
    """
    Step the Chern-Calabi flow and the classical Calabi stepper side by side.

    Args:
        u: conformal factor of an n = 1 background e^u (ignored when omega0
            is given)
        steps: number of rk4 steps
        dt: time step (default half the rk4 bound)
        omega0: Kähler background to use instead of e^u

    Returns:
        ReductionReport with the deviation after every step
    """
    if omega0 is None:
        omega0 = conformal_metric(u.grid, u)
    grid = omega0.grid
    if dt is None:
        dt = 0.5 * C_CFL * grid.h ** 4
    cfg = FlowConfig(integrator="rk4", dt=dt, min_eigen_guard=0.0)

    state = initial_state(ricci_potential(omega0), cfg)
    classical = ClassicalCalabiStepper(grid, omega0.components, dt)
    phi = np.zeros(grid.shape)

    report = ReductionReport(dt=dt)
    for _ in range(steps):
        state = step(state, cfg)
        phi = classical.step(phi)
        report.deviations.append(float(np.max(np.abs(state.phi.real - phi))))
    logger.info(f"[Verify] Calabi reduction: max deviation {report.max_deviation:.3e} over {steps} steps")
    return report

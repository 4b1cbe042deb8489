"""
Flow driver: stepping, renormalization, diagnostics and stopping.

Stopping is checked before each step in the order scalar_curv_tol, t_max,
max_steps. Degeneracy (min eigenvalue at or below the guard) and non-finite
values abort the run; the partial trajectory is still returned.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..functionals import (
    Background,
    FunctionalError,
    VelocityTerms,
    energies,
    evaluate_velocity,
    perturbed_metric,
    ricci_potential,
)
from ..geometry import pluriclosed_residual
from ..lattice import Grid, ScalarField, dealias, integrate, random_bandlimited
from ..metricgen import MetricRecipe, build_from_recipe
from .config import FlowConfig, FlowConfigError
from .integrators import imex_update, rk4_update
from .state import DiagnosticsRecord, FlowAbort, FlowState

logger = logging.getLogger("chern_flow")

CheckpointCallback = Callable[[FlowState], None]


# =============================================================================
# State construction and maintenance
# =============================================================================

def renormalize(state: FlowState) -> FlowState:
    """
    Subtract c = (1/V)∫φ ω_φⁿ so the potential has zero mean.

    The metric is rebuilt from the shifted potential so that a state
    restored from a checkpoint carries bit-identical fields. |c| is recorded.
    """
    metric = state.metric
    c = (integrate(state.phi, metric) / integrate(1.0, metric)).real
    phi = (state.phi - c).as_real()
    return FlowState(
        t=state.t,
        phi=phi,
        bg=state.bg,
        metric=perturbed_metric(state.bg, phi),
        step=state.step,
        renorm_correction=abs(c),
    )


def initial_state(bg: Background, cfg: FlowConfig) -> FlowState:
    """
    Normalized state at t = 0 from the configured initial potential.

    Raises:
        FlowConfigError: initial potential makes ω_φ non-positive
    """
    grid = bg.grid
    if cfg.initial_amplitude > 0:
        phi = random_bandlimited(cfg.initial_seed, cfg.initial_amplitude, cfg.initial_max_mode, grid)
    else:
        phi = ScalarField.zeros(grid)
    try:
        metric = perturbed_metric(bg, phi)
    except FunctionalError as exc:
        raise FlowConfigError(f"initial potential is not admissible: {exc}") from exc
    return renormalize(FlowState(t=0.0, phi=phi, bg=bg, metric=metric))


def diagnostics(state: FlowState, terms: Optional[VelocityTerms] = None) -> DiagnosticsRecord:
    """Diagnostics of the current state; the velocity is recomputed if not given."""
    bg = state.bg
    metric = state.metric
    if terms is None:
        terms = evaluate_velocity(bg, state.phi, metric)
    values = energies(bg, metric)
    V = bg.volume
    R = terms.scalar_curvature
    v = terms.velocity
    return DiagnosticsRecord(
        t=state.t,
        mab=values.mabuchi,
        ent=values.entropy,
        sup_r=R.sup_norm(),
        l2_r=math.sqrt(max(integrate(R * R, metric).real / V, 0.0)),
        f=integrate(v * v, metric).real / V,
        volume=values.volume,
        min_eigen=metric.min_eigen,
        pluriclosed_residual=pluriclosed_residual(metric),
        renorm_correction=state.renorm_correction,
        mean_velocity=integrate(v, metric).real / V,
        step=state.step,
    )


# =============================================================================
# Stepping
# =============================================================================

def _stage_velocity(bg: Background, state: FlowState) -> Callable[[np.ndarray], np.ndarray]:
    def velocity(values: np.ndarray) -> np.ndarray:
        phi = ScalarField(bg.grid, values, is_real=True)
        try:
            terms = evaluate_velocity(bg, phi)
        except FunctionalError as exc:
            raise FlowAbort("degeneracy", f"stage metric degenerate: {exc}", state) from exc
        return dealias(terms.velocity).real
    return velocity


def step(state: FlowState, cfg: FlowConfig, terms: Optional[VelocityTerms] = None) -> FlowState:
    """
    Advance one time step, dealias, renormalize.

    Args:
        state: current state
        cfg: flow configuration
        terms: velocity terms at state if already evaluated

    Returns:
        New normalized FlowState at t + dt

    Raises:
        FlowAbort: degeneracy (min eigenvalue ≤ guard) or non-finite values;
            carries the input state
    """
    bg = state.bg
    grid = bg.grid
    if terms is None:
        try:
            terms = evaluate_velocity(bg, state.phi, state.metric)
        except FunctionalError as exc:
            raise FlowAbort("non_finite", str(exc), state) from exc
    first = dealias(terms.velocity).real
    phi = state.phi.real

    if cfg.integrator == "rk4":
        new_phi = rk4_update(phi, cfg.dt, _stage_velocity(bg, state), first_stage=first)
    else:
        A = max(cfg.stabilization, 1.0 / state.metric.min_eigen ** 2)
        new_phi = imex_update(phi, cfg.dt, first, A, grid)

    if not np.all(np.isfinite(new_phi)):
        raise FlowAbort("non_finite", f"non-finite potential at step {state.step + 1}", state)
    phi_field = ScalarField(grid, new_phi, is_real=True)
    try:
        metric = perturbed_metric(bg, phi_field)
    except FunctionalError as exc:
        raise FlowAbort("degeneracy", f"ω_φ lost positivity at step {state.step + 1}: {exc}",
                        state) from exc
    if metric.min_eigen <= cfg.min_eigen_guard:
        raise FlowAbort(
            "degeneracy",
            f"min eigenvalue {metric.min_eigen:.4g} ≤ guard {cfg.min_eigen_guard} at step {state.step + 1}",
            state,
        )
    advanced = FlowState(t=state.t + cfg.dt, phi=phi_field, bg=bg, metric=metric,
                         step=state.step + 1)
    return renormalize(advanced)


# =============================================================================
# Runs
# =============================================================================

@dataclass
class RunResult:
    """
    Trajectory and outcome of a run.

    stop_reason is one of "scalar_curv_tol", "t_max", "max_steps",
    "degeneracy", "non_finite".
    """
    records: List[DiagnosticsRecord]
    final_state: FlowState
    stop_reason: str
    wall_time: float = 0.0
    abort_message: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def aborted(self) -> bool:
        return self.stop_reason in ("degeneracy", "non_finite")

    def max_mab_increase(self) -> float:
        mab = [r.mab for r in self.records]
        increases = [b - a for a, b in zip(mab, mab[1:])]
        return max([0.0] + increases)

    def det_variation(self) -> float:
        """(max − min)/mean of det g_φ at the final state."""
        det = self.final_state.metric.det.real
        return float((np.max(det) - np.min(det)) / np.mean(det))

    def volume_drift(self) -> float:
        V = self.final_state.bg.volume
        return max((abs(r.volume - V) / V for r in self.records), default=0.0)

    def summary(self) -> Dict[str, Any]:
        last = self.records[-1] if self.records else None
        return {
            "stop_reason": self.stop_reason,
            "abort_message": self.abort_message,
            "steps": self.final_state.step,
            "final_t": self.final_state.t,
            "final_sup_r": last.sup_r if last else None,
            "final_l2_r": last.l2_r if last else None,
            "final_f": last.f if last else None,
            "final_mab": last.mab if last else None,
            "max_mab_increase": self.max_mab_increase(),
            "max_abs_mean_velocity": max((abs(r.mean_velocity) for r in self.records), default=0.0),
            "det_relative_variation": self.det_variation(),
            "volume_drift": self.volume_drift(),
            "records": len(self.records),
            "wall_time_sec": self.wall_time,
            **self.extra,
        }


def _stop_reason(state: FlowState, sup_r: float, cfg: FlowConfig) -> Optional[str]:
    if sup_r < cfg.scalar_curv_tol:
        return "scalar_curv_tol"
    if state.t >= cfg.t_max * (1.0 - 1e-12):
        return "t_max"
    if state.step >= cfg.max_steps:
        return "max_steps"
    return None


def run_from_state(
    state: FlowState,
    cfg: FlowConfig,
    on_checkpoint: Optional[CheckpointCallback] = None,
    checkpoint_every: int = 0,
) -> RunResult:
    """
    Integrate from a given state until a stop condition or an abort.

    Records the starting state, every record_every steps and the final
    state. Aborts return the trajectory so far with the abort reason.
    """
    cfg.validate(state.bg.grid)
    started = time.perf_counter()
    records: List[DiagnosticsRecord] = []
    logger.info(f"[Flow] Run start: integrator={cfg.integrator}, dt={cfg.dt}, "
                f"t={state.t:.6g}, step={state.step}")

    abort: Optional[FlowAbort] = None
    while True:
        try:
            terms = evaluate_velocity(state.bg, state.phi, state.metric)
        except FunctionalError as exc:
            abort = FlowAbort("non_finite", str(exc), state)
            break
        sup_r = terms.scalar_curvature.sup_norm()
        reason = _stop_reason(state, sup_r, cfg)
        if reason is not None or state.step % cfg.record_every == 0 or not records:
            records.append(diagnostics(state, terms))
        if reason is not None:
            break
        logger.debug(f"[Flow] step={state.step} t={state.t:.6g} sup_R={sup_r:.3e}")
        try:
            state = step(state, cfg, terms)
        except FlowAbort as exc:
            abort = exc
            break
        if on_checkpoint is not None and checkpoint_every > 0 and state.step % checkpoint_every == 0:
            on_checkpoint(state)

    if abort is not None:
        state = abort.state
        if not records or records[-1].step != state.step:
            records.append(diagnostics(state))
        result = RunResult(records, state, abort.reason, abort_message=str(abort))
        logger.error(f"[Flow] Run aborted ({abort.reason}): {abort}")
    else:
        result = RunResult(records, state, reason)
        logger.info(f"[Flow] Run stopped: {reason} after {state.step} steps, t={state.t:.6g}, "
                    f"sup_R={records[-1].sup_r:.3e}")
    result.wall_time = time.perf_counter() - started
    return result


def run(
    recipe: MetricRecipe,
    cfg: FlowConfig,
    grid: Grid,
    start: Optional[FlowState] = None,
    on_checkpoint: Optional[CheckpointCallback] = None,
    checkpoint_every: int = 0,
) -> RunResult:
    """
    Build the background from a recipe and run the flow.

    Args:
        recipe: background metric recipe
        cfg: flow configuration
        grid: lattice
        start: resume state (its background must come from the same recipe)
        on_checkpoint: called with the state every checkpoint_every steps

    Raises:
        FlowConfigError: invalid configuration or initial potential
        RecipeError, PositivityError: background cannot be built
    """
    cfg.validate(grid)
    if start is None:
        bg = ricci_potential(build_from_recipe(grid, recipe))
        start = initial_state(bg, cfg)
    result = run_from_state(start, cfg, on_checkpoint, checkpoint_every)
    result.extra["recipe_fingerprint"] = recipe.fingerprint()
    return result


def uniqueness_check(a: RunResult, b: RunResult) -> float:
    """Relative sup distance between the final det g_φ fields of two runs."""
    det_a = a.final_state.metric.det.real
    det_b = b.final_state.metric.det.real
    return float(np.max(np.abs(det_a - det_b)) / np.max(np.abs(det_b)))

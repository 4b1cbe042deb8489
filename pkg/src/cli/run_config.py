"""
Flat key = value configuration files for run, verify and gen.

One key per line, '#' starts a comment, blank lines are ignored. Every
accepted key is listed in KNOWN_KEYS; anything else is an error, so a
typo never silently falls back to a default. Parsing happens before any
output is written.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union

from ..flow import FlowConfig, FlowConfigError
from ..infra.data_paths import get_default_checkpoint_every
from ..lattice import Grid, GridSpec, LatticeError
from ..metricgen import MetricRecipe, RecipeError
from .config import DEFAULT_RUN_NAME, DEFAULT_VERIFY_SEEDS

logger = logging.getLogger("chern_flow")


class ConfigError(ValueError):
    """Malformed line, unknown key, bad value or missing file."""
    pass


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# key -> (converter, description)
KNOWN_KEYS: Dict[str, Tuple[Callable[[str], Any], str]] = {
    "n": (int, "complex dimension, 1 or 2"),
    "points_per_axis": (int, "grid points N on every real axis (even, ≥ 8)"),
    "period": (float, "edge length L of every real axis"),
    "recipe.kind": (str, "flat | conformal | kahler | random_pluriclosed | constant_det_fixture"),
    "recipe.seed": (int, "seed of random profiles"),
    "recipe.amplitude": (float, "sup-norm of the perturbation"),
    "recipe.max_mode": (int, "band limit (random) or wave number (sine)"),
    "recipe.mode": (int, "phase mode of constant_det_fixture"),
    "recipe.profile": (str, "random | sine"),
    "recipe.epsilon": (float, "off-diagonal size of constant_det_fixture"),
    "flow.integrator": (str, "imex | rk4"),
    "flow.dt": (float, "time step"),
    "flow.t_max": (float, "stop once t reaches this"),
    "flow.max_steps": (int, "stop after this many steps"),
    "flow.scalar_curv_tol": (float, "stop when sup |R| falls below"),
    "flow.min_eigen_guard": (float, "abort when min eigenvalue of ω_φ is at or below"),
    "flow.stabilization": (float, "lower bound of the imex coefficient"),
    "flow.record_every": (int, "diagnostics cadence in steps"),
    "flow.initial_amplitude": (float, "sup-norm of the initial potential"),
    "flow.initial_seed": (int, "seed of the initial potential"),
    "flow.initial_max_mode": (int, "band limit of the initial potential"),
    "output_dir": (str, "output directory (CHERN_FLOW_OUTPUT_DIR overrides)"),
    "name": (str, "subdirectory and file stem of this run"),
    "resume_from": (str, "checkpoint file to resume from"),
    "emit.csv": (_parse_bool, "write the trajectory CSV"),
    "emit.summary": (_parse_bool, "write the JSON summary"),
    "emit.checkpoints": (_parse_bool, "write checkpoints while running"),
    "emit.checkpoint_every": (int, "checkpoint cadence in steps"),
    "verify.seeds": (int, "number of fixtures (recipe seeds seed, seed+1, ...)"),
    "verify.aux_max_mode": (int, "band limit of the auxiliary fields"),
    "verify.negative_control": (_parse_bool, "run the suite on deliberately broken metrics"),
}


@dataclass(frozen=True)
class EmitFlags:
    csv: bool = True
    summary: bool = True
    checkpoints: bool = False
    checkpoint_every: int = 0


@dataclass(frozen=True)
class VerifyOptions:
    seeds: int = DEFAULT_VERIFY_SEEDS
    aux_max_mode: Optional[int] = None
    negative_control: bool = False


@dataclass(frozen=True)
class RunConfig:
    """
    A parsed configuration file.

    Attributes:
        grid: lattice spec
        recipe: background metric recipe
        flow: flow configuration
        output_dir: configured output directory (env override applied later)
        name: run name
        resume_from: checkpoint path, if resuming
        emit: output flags
        verify: options of the verify command
        values: the raw key -> value mapping after conversion
    """
    grid: GridSpec
    recipe: MetricRecipe
    flow: FlowConfig
    output_dir: Optional[str] = None
    name: str = DEFAULT_RUN_NAME
    resume_from: Optional[str] = None
    emit: EmitFlags = field(default_factory=EmitFlags)
    verify: VerifyOptions = field(default_factory=VerifyOptions)
    values: Dict[str, Any] = field(default_factory=dict)


def parse_lines(text: str) -> Dict[str, Any]:
    """
    Convert config text into typed values.

    Raises:
        ConfigError: malformed line, unknown or duplicate key, bad value
    """
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {number}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {number}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {number}: empty value for {key!r}")
        converter = KNOWN_KEYS[key][0]
        try:
            values[key] = converter(value)
        except ValueError as e:
            raise ConfigError(f"line {number}: bad value for {key!r}: {e}") from e
    return values


def _section(values: Dict[str, Any], prefix: str) -> Dict[str, Any]:
    return {key[len(prefix):]: value for key, value in values.items() if key.startswith(prefix)}


def parse_config_text(text: str) -> RunConfig:
    """
    Parse and validate a configuration.

    Raises:
        ConfigError: any syntax or validation failure
    """
    values = parse_lines(text)
    if "n" not in values or "points_per_axis" not in values:
        raise ConfigError("config must set 'n' and 'points_per_axis'")

    try:
        grid = GridSpec(values["n"], values["points_per_axis"], values.get("period", 1.0))
        grid.validate()
        recipe = MetricRecipe(**_section(values, "recipe."))
        recipe.validate()
        flow = FlowConfig(**_section(values, "flow."))
        flow.validate(Grid(grid))
    except (LatticeError, RecipeError, FlowConfigError) as e:
        raise ConfigError(str(e)) from e

    emit_values = _section(values, "emit.")
    if emit_values.get("checkpoints") and "checkpoint_every" not in emit_values:
        emit_values["checkpoint_every"] = get_default_checkpoint_every()
    emit = EmitFlags(**emit_values)
    if emit.checkpoint_every < 0:
        raise ConfigError(f"emit.checkpoint_every must be ≥ 0, got {emit.checkpoint_every}")

    verify = VerifyOptions(**_section(values, "verify."))
    if verify.seeds < 1:
        raise ConfigError(f"verify.seeds must be ≥ 1, got {verify.seeds}")

    name = values.get("name", DEFAULT_RUN_NAME)
    if "/" in name or "\\" in name or name in (".", ".."):
        raise ConfigError(f"name must be a plain file stem, got {name!r}")

    return RunConfig(
        grid=grid,
        recipe=recipe,
        flow=flow,
        output_dir=values.get("output_dir"),
        name=name,
        resume_from=values.get("resume_from"),
        emit=emit,
        verify=verify,
        values=values,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and parse a configuration file.

    Raises:
        ConfigError: missing or unreadable file, or invalid contents
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    config = parse_config_text(text)
    logger.debug(f"[ChernFlowCLI] Loaded config {path}: {len(config.values)} keys")
    return config

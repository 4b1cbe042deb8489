"""
CLI entry point for chern-flow.

Subcommands:
    run <config>      integrate the flow, write trajectory CSV, summary, checkpoints
    verify <config>   run the identity suite on a family of seeded fixtures
    gen <config>      build a fixture metric and write it as a checkpoint

Every command returns a stable exit code (see config.py); expected
failures are logged and reported on stderr without a traceback.
"""

import argparse
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional

from ..flow import FlowConfigError, FlowState, RunResult, run
from ..functionals import FunctionalError, ricci_potential
from ..geometry import GeometryError, pluriclosed_residual, torsion
from ..infra.data_paths import get_fixtures_dir, get_output_dir, get_reports_dir
from ..infra.logging_config import COMMANDS, setup_logging
from ..lattice import Grid, LatticeError, ScalarField, make_grid
from ..metricgen import RecipeError, build_from_recipe, non_gauduchon_control
from ..verify import IdentityReport, identity_suite, registered_identities
from ..verify.identities import CONTROL_DELTA
from .checkpoint import CheckpointError, read_checkpoint, write_checkpoint
from .config import (
    EXIT_CONFIG_ERROR,
    EXIT_CONTROL_FAILURE,
    EXIT_DISK_ERROR,
    EXIT_IDENTITY_FAILURE,
    EXIT_NON_FINITE,
    EXIT_SUCCESS,
    FIXTURE_DESCRIPTION_SUFFIX,
    CHECKPOINT_SUFFIX,
    STOP_REASON_EXIT_CODES,
)
from .output_writer import (
    checkpoint_path,
    get_run_paths,
    report_path,
    write_json,
    write_trajectory_csv,
)
from .run_config import ConfigError, RunConfig, load_config

logger = logging.getLogger("chern_flow")


def _fail(message: str, code: int) -> int:
    print(f"Error: {message}", file=sys.stderr)
    return code


def _load(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config)
    logger.info(f"[ChernFlowCLI] Config {args.config}: n={config.grid.n}, "
                f"N={config.grid.points_per_axis}, recipe={config.recipe.kind}")
    return config


def _configured_dir(args: argparse.Namespace, config: RunConfig) -> Optional[str]:
    return getattr(args, "output_dir", None) or config.output_dir


# =============================================================================
# run
# =============================================================================

def _resume_state(config: RunConfig, grid: Grid) -> FlowState:
    """
    Raises:
        CheckpointError: unreadable or invalid checkpoint
        ConfigError: checkpoint belongs to another grid or recipe
    """
    checkpoint = read_checkpoint(config.resume_from)
    if checkpoint.grid != config.grid:
        raise ConfigError(f"checkpoint grid {checkpoint.grid} differs from config grid {config.grid}")
    if checkpoint.recipe.fingerprint() != config.recipe.fingerprint():
        raise ConfigError("checkpoint recipe differs from the config recipe")
    logger.info(f"[ChernFlowCLI] Resuming from {config.resume_from} at step {checkpoint.step}")
    return checkpoint.to_state()


def cmd_run(args: argparse.Namespace) -> int:
    """
    Run the flow described by a config.

    Returns:
        Exit code from the stop reason, or an error code
    """
    try:
        config = _load(args)
        grid = make_grid(config.grid)
        start = _resume_state(config, grid) if config.resume_from else None
    except ConfigError as e:
        logger.error(f"[ChernFlowCLI] Invalid config: {e}")
        return _fail(str(e), EXIT_CONFIG_ERROR)
    except CheckpointError as e:
        logger.error(f"[ChernFlowCLI] Checkpoint error: {e}")
        return _fail(str(e), EXIT_DISK_ERROR)

    paths = get_run_paths(get_output_dir(_configured_dir(args, config)), config.name)
    emit = config.emit

    def on_checkpoint(state: FlowState) -> None:
        write_checkpoint(checkpoint_path(paths["checkpoints"], state.step), state, config.recipe,
                         config.flow.dt, config.flow.integrator, config.flow.initial_seed)

    logger.info(f"[ChernFlowCLI] === Run '{config.name}' started ===")
    try:
        result: RunResult = run(
            config.recipe,
            config.flow,
            grid,
            start=start,
            on_checkpoint=on_checkpoint if emit.checkpoints else None,
            checkpoint_every=emit.checkpoint_every,
        )
    except (FlowConfigError, RecipeError, GeometryError, LatticeError) as e:
        logger.error(f"[ChernFlowCLI] Cannot start run: {e}")
        return _fail(str(e), EXIT_CONFIG_ERROR)
    except FunctionalError as e:
        logger.error(f"[ChernFlowCLI] Background is not usable: {e}")
        return _fail(str(e), EXIT_NON_FINITE)
    except CheckpointError as e:
        logger.error(f"[ChernFlowCLI] Checkpoint error: {e}")
        return _fail(str(e), EXIT_DISK_ERROR)

    try:
        if emit.csv:
            write_trajectory_csv(paths["csv"], result.records)
        if emit.summary:
            write_json(paths["summary"], {
                "name": config.name,
                "grid": config.grid.to_dict(),
                "recipe": config.recipe.to_dict(),
                "flow": config.flow.to_dict(),
                "resumed_from": config.resume_from,
                "summary": result.summary(),
            })
        if emit.checkpoints:
            on_checkpoint(result.final_state)
    except (OSError, CheckpointError) as e:
        logger.error(f"[ChernFlowCLI] Disk error: {e}")
        return _fail(f"failed to write output files: {e}", EXIT_DISK_ERROR)

    summary = result.summary()
    print(f"Run: {config.name}")
    print(f"Stop reason: {result.stop_reason}")
    print(f"Steps: {summary['steps']}  t: {summary['final_t']:.6g}")
    if summary["final_sup_r"] is not None:
        print(f"sup|R|: {summary['final_sup_r']:.3e}  Mab: {summary['final_mab']:.10g}")
    if emit.csv:
        print(f"CSV: {paths['csv']}")
    if result.abort_message:
        print(f"Abort: {result.abort_message}", file=sys.stderr)
    logger.info(f"[ChernFlowCLI] === Run '{config.name}' finished: {result.stop_reason} ===")
    return STOP_REASON_EXIT_CODES[result.stop_reason]


# =============================================================================
# verify
# =============================================================================

def _controls_failed_as_expected(report: IdentityReport) -> bool:
    """Negative control: every conditional identity must have failed."""
    conditional = {spec.name for spec in registered_identities() if spec.conditional}
    return all(r.status == "fail" for r in report.results if r.name in conditional)


def cmd_verify(args: argparse.Namespace) -> int:
    """
    Run the identity suite on verify.seeds fixtures of the configured family.

    In negative-control mode every fixture is replaced by its deliberately
    non-Gauduchon perturbation and the conditional identities must fail.

    Returns:
        0 when everything behaved, 20 on an identity failure, 21 when a
        negative control did not fail
    """
    try:
        config = _load(args)
        grid = make_grid(config.grid)
    except ConfigError as e:
        logger.error(f"[ChernFlowCLI] Invalid config: {e}")
        return _fail(str(e), EXIT_CONFIG_ERROR)

    options = config.verify
    negative = options.negative_control
    if negative and grid.n != 2:
        return _fail("verify.negative_control needs n = 2", EXIT_CONFIG_ERROR)
    reports_dir = get_reports_dir(_configured_dir(args, config))

    started = time.perf_counter()
    fixtures: List[Dict[str, Any]] = []
    identity_failures = 0
    control_failures = 0
    for index in range(options.seeds):
        seed = config.recipe.seed + index
        recipe = config.recipe.with_seed(seed)
        try:
            g = build_from_recipe(grid, recipe)
            if negative:
                g = non_gauduchon_control(g, min(CONTROL_DELTA, 0.5 * g.min_eigen))
        except (RecipeError, GeometryError, LatticeError) as e:
            logger.error(f"[ChernFlowCLI] Cannot build fixture seed={seed}: {e}")
            return _fail(str(e), EXIT_CONFIG_ERROR)

        report = identity_suite(g, seed, fingerprint=recipe.fingerprint(),
                                aux_max_mode=options.aux_max_mode, force_conditional=negative)
        if negative:
            behaved = _controls_failed_as_expected(report)
            control_failures += 0 if behaved else 1
        else:
            identity_failures += 0 if report.all_passed else 1
            control_failures += 0 if report.controls_behaved else 1
            behaved = report.controls_behaved

        path = report_path(reports_dir, config.name, index, seed)
        try:
            write_json(path, {"negative_control": negative, "report": report.to_dict()})
        except OSError as e:
            logger.error(f"[ChernFlowCLI] Disk error: {e}")
            return _fail(f"failed to write report: {e}", EXIT_DISK_ERROR)
        fixtures.append({
            "seed": seed,
            "fingerprint": report.fingerprint,
            "all_passed": report.all_passed,
            "controls_behaved": behaved,
            "failures": [r.name for r in report.failures()],
            "resolution": report.resolution,
            "report": str(path),
        })
        status = "ok" if (report.all_passed or negative) and behaved else "FAILED"
        print(f"  seed {seed}: {status}  resolution={report.resolution:.2e}  "
              f"failures={[r.name for r in report.failures()]}")

    wall_time = time.perf_counter() - started
    try:
        write_json(reports_dir / f"verify_{config.name}.json", {
            "name": config.name,
            "grid": config.grid.to_dict(),
            "recipe": config.recipe.to_dict(),
            "negative_control": negative,
            "fixtures": fixtures,
            "identity_failures": identity_failures,
            "control_failures": control_failures,
            "wall_time_sec": wall_time,
        })
    except OSError as e:
        return _fail(f"failed to write verify summary: {e}", EXIT_DISK_ERROR)

    print(f"Fixtures: {len(fixtures)}  identity failures: {identity_failures}  "
          f"control failures: {control_failures}  wall time: {wall_time:.1f}s")
    if identity_failures:
        logger.warning(f"[ChernFlowCLI] verify: {identity_failures} fixtures with failing identities")
        return EXIT_IDENTITY_FAILURE
    if control_failures:
        logger.warning(f"[ChernFlowCLI] verify: {control_failures} fixtures whose controls did not fail")
        return EXIT_CONTROL_FAILURE
    logger.info("[ChernFlowCLI] verify: all identities passed, controls behaved")
    return EXIT_SUCCESS


# =============================================================================
# gen
# =============================================================================

def cmd_gen(args: argparse.Namespace) -> int:
    """
    Build the configured metric and write it as a checkpoint with φ = 0,
    plus a JSON description.
    """
    try:
        config = _load(args)
        grid = make_grid(config.grid)
        metric = build_from_recipe(grid, config.recipe)
        bg = ricci_potential(metric)
    except ConfigError as e:
        logger.error(f"[ChernFlowCLI] Invalid config: {e}")
        return _fail(str(e), EXIT_CONFIG_ERROR)
    except (RecipeError, GeometryError, LatticeError) as e:
        logger.error(f"[ChernFlowCLI] Cannot build fixture: {e}")
        return _fail(str(e), EXIT_CONFIG_ERROR)
    except FunctionalError as e:
        return _fail(str(e), EXIT_NON_FINITE)

    state = FlowState(t=0.0, phi=ScalarField.zeros(grid).as_real(), bg=bg, metric=metric)
    fixtures_dir = get_fixtures_dir(_configured_dir(args, config))
    stem = fixtures_dir / config.name
    det = metric.det.real
    description = {
        "name": config.name,
        "grid": config.grid.to_dict(),
        "recipe": config.recipe.to_dict(),
        "fingerprint": config.recipe.fingerprint(),
        "det_min": float(det.min()),
        "det_max": float(det.max()),
        "min_eigen": metric.min_eigen,
        "max_eigen": metric.max_eigen,
        "torsion_sup": torsion(metric).upper.sup_norm(),
        "pluriclosed_residual": pluriclosed_residual(metric),
        "volume": bg.volume,
    }
    try:
        ckpt = write_checkpoint(stem.with_suffix(CHECKPOINT_SUFFIX), state, config.recipe,
                                config.flow.dt, config.flow.integrator)
        desc = write_json(stem.with_suffix(FIXTURE_DESCRIPTION_SUFFIX), description)
    except (OSError, CheckpointError) as e:
        logger.error(f"[ChernFlowCLI] Disk error: {e}")
        return _fail(f"failed to write fixture: {e}", EXIT_DISK_ERROR)

    print(f"Fixture: {config.name} ({config.recipe.kind})")
    print(f"Fingerprint: {description['fingerprint']}")
    print(f"Checkpoint: {ckpt}")
    print(f"Description: {desc}")
    return EXIT_SUCCESS


# =============================================================================
# Parser
# =============================================================================

def create_parser() -> argparse.ArgumentParser:
    """
    Create argument parser.

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="chern-flow",
        description="Chern-Calabi flow simulator and identity verification suite",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose (DEBUG) logging"
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands")
    for name, help_text in (
        ("run", "Integrate the flow described by a config"),
        ("verify", "Run the identity suite on seeded fixtures"),
        ("gen", "Write a fixture metric as a checkpoint"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("config", help="Path to a key = value config file")
        sub.add_argument(
            "-o", "--output-dir",
            help="Output directory (CHERN_FLOW_OUTPUT_DIR still takes precedence)"
        )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Args:
        argv: Command line arguments (default: sys.argv[1:])

    Returns:
        Exit code
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    level = "DEBUG" if args.verbose else os.getenv("LOG_LEVEL", "INFO").upper()
    setup_logging(level, command=args.command if args.command in COMMANDS else "run")

    if args.command == "run":
        return cmd_run(args)
    elif args.command == "verify":
        return cmd_verify(args)
    elif args.command == "gen":
        return cmd_gen(args)
    else:
        parser.print_help()
        return EXIT_SUCCESS


if __name__ == "__main__":
    sys.exit(main())

"""
Data path helpers for the Chern-Calabi flow simulator.

Centralized path management for run outputs, identity reports, generated
fixtures and logs.

Directory structure:
data/runs/                     # output directory, one subdirectory per flow run
 ├── <run_name>/
 │   ├── trajectory.csv
 │   ├── summary.json
 │   └── checkpoints/       # step_<step>.ckpt
 ├── reports/               # Identity suite reports (verify)
 └── fixtures/              # Metrics written by `gen`

logs/                          # Command logs (run_, verify_, gen_), rotated daily

Environment Variables:
- CHERN_FLOW_OUTPUT_DIR: Override the run output directory (default: data/runs)
- CHERN_FLOW_LOG_DIR: Override the log directory (default: logs)
- CHERN_FLOW_CHECKPOINT_EVERY: Default checkpoint cadence when a config
  enables checkpoints without giving one (default: 100)
"""

import logging
import os
from pathlib import Path
from typing import Optional

logger = logging.getLogger("chern_flow")

# =============================================================================
# Environment Variable Configuration
# =============================================================================

def _get_env_int(key: str, default: int) -> int:
    """Get integer value from environment variable."""
    val = os.getenv(key)
    if val is not None:
        try:
            return int(val)
        except ValueError:
            logger.warning(f"[DataPaths] Invalid integer for {key}: {val}, using default: {default}")
    return default

# =============================================================================
# Base Paths (relative to project root)
# =============================================================================

def get_project_root() -> Path:
    """
    Get the project root directory.

    File is at src/infra/data_paths.py, so project root is 2 levels up.

    Returns:
        Path: Project root directory
    """
    return Path(__file__).parent.parent.parent.resolve()


def get_data_root() -> Path:
    """
    Get the data root directory.

    Returns:
        Path: data/ directory path
    """
    return get_project_root() / "data"


# =============================================================================
# Output Paths
# =============================================================================

def get_output_dir(configured: Optional[str] = None) -> Path:
    """
    Get the run output directory.

    Precedence: CHERN_FLOW_OUTPUT_DIR environment variable, then the value
    from the run config, then data/runs.

    Args:
        configured: output_dir value from a run config, if any

    Returns:
        Path: Output directory
    """
    env_path = os.getenv("CHERN_FLOW_OUTPUT_DIR")
    if env_path:
        return Path(env_path).resolve()
    if configured:
        return Path(configured).resolve()
    return get_data_root() / "runs"


def get_reports_dir(configured: Optional[str] = None) -> Path:
    """Get identity report directory (sibling of the run outputs)."""
    return get_output_dir(configured) / "reports"


def get_fixtures_dir(configured: Optional[str] = None) -> Path:
    """Get directory for metrics written by the gen command."""
    return get_output_dir(configured) / "fixtures"


def get_logs_dir() -> Path:
    """
    Get logs directory.

    Can be overridden via CHERN_FLOW_LOG_DIR environment variable.

    Returns:
        Path: Logs directory
    """
    env_path = os.getenv("CHERN_FLOW_LOG_DIR")
    if env_path:
        return Path(env_path).resolve()
    return get_project_root() / "logs"


def get_default_checkpoint_every() -> int:
    """Checkpoint cadence used when a config enables checkpoints without one."""
    return _get_env_int("CHERN_FLOW_CHECKPOINT_EVERY", 100)


# =============================================================================
# Directory Initialization
# =============================================================================

def ensure_data_directories(configured: Optional[str] = None) -> dict:
    """
    Ensure all output directories exist.

    Safe to call multiple times.

    Returns:
        dict: Dictionary of created/existing directory paths
    """
    directories = {
        "output": get_output_dir(configured),
        "reports": get_reports_dir(configured),
        "fixtures": get_fixtures_dir(configured),
        "logs": get_logs_dir(),
    }

    for name, path in directories.items():
        path.mkdir(parents=True, exist_ok=True)
        logger.debug(f"[DataPaths] Ensured directory: {name} -> {path}")

    return directories

"""
Configuration constants for the chern-flow CLI.
"""

# Exit codes (stable contract, documented in README)
EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_DEGENERACY = 2
EXIT_NON_FINITE = 3
EXIT_DISK_ERROR = 4
EXIT_T_MAX = 10
EXIT_MAX_STEPS = 11
EXIT_IDENTITY_FAILURE = 20
EXIT_CONTROL_FAILURE = 21

STOP_REASON_EXIT_CODES = {
    "scalar_curv_tol": EXIT_SUCCESS,
    "t_max": EXIT_T_MAX,
    "max_steps": EXIT_MAX_STEPS,
    "degeneracy": EXIT_DEGENERACY,
    "non_finite": EXIT_NON_FINITE,
}

# Output file names inside <output_dir>/<name>/
TRAJECTORY_FILE = "trajectory.csv"
SUMMARY_FILE = "summary.json"
CHECKPOINT_DIR = "checkpoints"
CHECKPOINT_SUFFIX = ".ckpt"
REPORT_PREFIX = "identity_report"
FIXTURE_DESCRIPTION_SUFFIX = ".json"

DEFAULT_RUN_NAME = "run"
DEFAULT_VERIFY_SEEDS = 1

# Output schema version
SCHEMA_VERSION = "1.0"

"""
Command line surface: config files, checkpoints, output files and the
run / verify / gen commands.
"""

from .checkpoint import Checkpoint, CheckpointError, read_checkpoint, write_checkpoint
from .cli import create_parser, main
from .run_config import ConfigError, RunConfig, load_config, parse_config_text

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "ConfigError",
    "RunConfig",
    "create_parser",
    "load_config",
    "main",
    "parse_config_text",
    "read_checkpoint",
    "write_checkpoint",
]

"""
Infrastructure module - logging and data paths.
"""

from .data_paths import (
    get_project_root,
    get_data_root,
    get_output_dir,
    get_reports_dir,
    get_fixtures_dir,
    get_logs_dir,
    ensure_data_directories,
)

from .logging_config import setup_logging, LOGGER_NAME

__all__ = [
    # data_paths
    "get_project_root",
    "get_data_root",
    "get_output_dir",
    "get_reports_dir",
    "get_fixtures_dir",
    "get_logs_dir",
    "ensure_data_directories",
    # logging
    "setup_logging",
    "LOGGER_NAME",
]

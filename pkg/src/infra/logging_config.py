"""
Logging configuration for flow runs, verification and fixture generation.

Library modules log through the ``chern_flow`` logger with a bracketed
component tag ("[Flow]", "[Verify]", "[Geometry]", ...). The CLI attaches a
console handler and one command log file per invocation; the component tag
is lifted into its own column so flow and verify lines can be filtered.
"""

import logging
import re
from datetime import datetime
from pathlib import Path
from typing import Optional

LOGGER_NAME = "chern_flow"
COMMANDS = ("run", "verify", "gen")

LOG_FORMAT = "%(asctime)s | %(levelname)-7s | %(command)s | %(component)-10s | %(message)s"

_COMPONENT_TAG = re.compile(r"^\[([A-Za-z]+)\]")

# Process start time is captured once and shared by every command log
_PROCESS_START_TIME: Optional[str] = None


class ComponentFilter(logging.Filter):
    """
    Adds ``command`` and ``component`` attributes to every record.

    component is the bracketed tag at the start of the message ("Flow" for
    "[Flow] step=3 ..."), or "-" when the message has none.
    """

    def __init__(self, command: str):
        super().__init__()
        self.command = command

    def filter(self, record: logging.LogRecord) -> bool:
        match = _COMPONENT_TAG.match(str(record.msg))
        record.command = self.command
        record.component = match.group(1) if match else "-"
        return True


class CommandLogHandler(logging.FileHandler):
    """
    File handler writing one log family per CLI command.

    Files are named logs/<command>_YYYYMMDD_<START_HHMMSS>.log. START_HHMMSS
    is fixed at process start and only the date part moves, so a long flow
    run that crosses midnight continues in a new file of the same family.
    """

    def __init__(self, command: str = "run", log_dir: str = "logs", encoding: str = "utf-8"):
        global _PROCESS_START_TIME

        if command not in COMMANDS:
            raise ValueError(f"unknown command {command!r}, expected one of {COMMANDS}")
        self.command = command
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)

        if _PROCESS_START_TIME is None:
            _PROCESS_START_TIME = datetime.now().strftime("%H%M%S")
        self._start_hhmmss = _PROCESS_START_TIME

        self._current_date = datetime.now().strftime("%Y%m%d")
        super().__init__(self._log_path(self._current_date), mode="a", encoding=encoding)

    def _log_path(self, date_str: str) -> str:
        return str(self.log_dir / f"{self.command}_{date_str}_{self._start_hhmmss}.log")

    def emit(self, record: logging.LogRecord) -> None:
        current_date = datetime.now().strftime("%Y%m%d")
        if current_date != self._current_date:
            self.close()
            self.baseFilename = self._log_path(current_date)
            self._current_date = current_date
            self.stream = self._open()
        super().emit(record)


def setup_logging(log_level: str = "INFO", log_dir: Optional[str] = None,
                  command: str = "run") -> logging.Logger:
    """
    Configure the ``chern_flow`` logger for one CLI command and return it.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_dir: directory for the command log. Defaults to the project
            logs directory (CHERN_FLOW_LOG_DIR override honored).
        command: "run", "verify" or "gen"; names the log file and fills
            the command column

    Returns:
        logging.Logger: the configured ``chern_flow`` logger
    """
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(numeric_level)
    logger.propagate = False

    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)
    tagger = ComponentFilter(command)

    if log_dir is None:
        from .data_paths import get_logs_dir
        log_dir = str(get_logs_dir())

    for handler in (logging.StreamHandler(), CommandLogHandler(command, log_dir)):
        handler.setLevel(numeric_level)
        handler.addFilter(tagger)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.info(f"[Logging] {command} started - level: {log_level}, "
                f"log file: {logger.handlers[-1].baseFilename}")
    return logger

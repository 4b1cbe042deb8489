"""
Output file writer for runs, identity reports and fixtures.
"""

import csv
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List

from ..flow import CSV_COLUMNS, DiagnosticsRecord
from .config import (
    CHECKPOINT_DIR,
    CHECKPOINT_SUFFIX,
    REPORT_PREFIX,
    SCHEMA_VERSION,
    SUMMARY_FILE,
    TRAJECTORY_FILE,
)

logger = logging.getLogger("chern_flow")


def get_run_paths(output_dir: Path, name: str) -> Dict[str, Path]:
    """
    Output paths of a run.

    Returns:
        Dict with 'dir', 'csv', 'summary' and 'checkpoints' paths
    """
    run_dir = output_dir / name
    return {
        "dir": run_dir,
        "csv": run_dir / TRAJECTORY_FILE,
        "summary": run_dir / SUMMARY_FILE,
        "checkpoints": run_dir / CHECKPOINT_DIR,
    }


def checkpoint_path(checkpoint_dir: Path, step: int) -> Path:
    """Checkpoint file for a step, zero-padded so names sort by step."""
    return checkpoint_dir / f"step_{step:08d}{CHECKPOINT_SUFFIX}"


def report_path(reports_dir: Path, name: str, index: int, seed: int) -> Path:
    return reports_dir / f"{REPORT_PREFIX}_{name}_{index:03d}_seed{seed}.json"


def _format(value: float) -> str:
    # repr round-trips floats exactly
    return repr(float(value))


def write_trajectory_csv(path: Path, records: Iterable[DiagnosticsRecord]) -> Path:
    """
    Write diagnostics records with the fixed CSV column set.

    Raises:
        IOError: the file cannot be written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow([_format(value) for value in record.csv_row()])
            rows += 1
    logger.info(f"[ChernFlowCLI] Wrote {rows} records to {path}")
    return path


def read_trajectory_csv(path: Path) -> List[Dict[str, float]]:
    """
    Parse a trajectory CSV back into floats.

    Raises:
        ValueError: header differs from CSV_COLUMNS
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = tuple(next(reader, ()))
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        return [dict(zip(CSV_COLUMNS, (float(v) for v in row))) for row in reader]


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    """
    Write a JSON document stamped with schema_version and created_at.

    Raises:
        IOError: the file cannot be written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"schema_version": SCHEMA_VERSION, "created_at": datetime.now().isoformat()}
    document.update(payload)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, ensure_ascii=False, indent=2)
    logger.debug(f"[ChernFlowCLI] Wrote {path}")
    return path

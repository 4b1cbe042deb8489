"""
Binary checkpoints of a flow state.

Layout:

    CHERNFLOW-CHECKPOINT
    key=value lines (floats as float.hex, recipe as compact JSON)
    END_HEADER
    φ block:  phi_count little-endian float64, site-major (C order)
    ω0 block: metric_count little-endian float64, the components
              G[j, k] in C order with each complex entry as (re, im)

Floats in the header are hex so they round-trip bit-exactly; the blocks
are raw '<f8'. Reading checks the magic line, the format version, the
block lengths and rejects NaN or infinite values.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from ..flow import FlowState
from ..functionals import FunctionalError, perturbed_metric, ricci_potential
from ..geometry import GeometryError, metric_from_components
from ..lattice import Grid, GridSpec, LatticeError, ScalarField
from ..metricgen import MetricRecipe, RecipeError

logger = logging.getLogger("chern_flow")

MAGIC = "CHERNFLOW-CHECKPOINT"
FORMAT_VERSION = 1
END_HEADER = "END_HEADER"
BLOCK_DTYPE = np.dtype("<f8")

HEADER_KEYS = (
    "format_version", "n", "points_per_axis", "period", "recipe_fingerprint", "recipe",
    "t", "dt", "step", "integrator", "rng_seed", "renorm_correction",
    "phi_count", "metric_count", "byte_order",
)


class CheckpointError(Exception):
    """Version mismatch, truncated or malformed file, non-finite data, or I/O failure."""
    pass


@dataclass(frozen=True)
class Checkpoint:
    """
    Decoded checkpoint.

    Attributes:
        grid: lattice spec
        recipe: recipe of the background metric
        t: flow time
        dt: time step of the run that wrote it
        step: steps taken
        integrator: integrator of the run that wrote it
        rng_seed: seed of the initial potential
        renorm_correction: |c| of the last renormalization
        phi: potential values, grid shape
        omega0: background components, shape (n, n, *grid)
    """
    grid: GridSpec
    recipe: MetricRecipe
    t: float
    dt: float
    step: int
    integrator: str
    rng_seed: int
    renorm_correction: float
    phi: np.ndarray
    omega0: np.ndarray

    def to_state(self) -> FlowState:
        """
        Rebuild the flow state, background included.

        Raises:
            CheckpointError: stored metric or potential is not admissible
        """
        grid = Grid(self.grid)
        try:
            bg = ricci_potential(metric_from_components(grid, self.omega0))
            phi = ScalarField(grid, self.phi, is_real=True)
            metric = perturbed_metric(bg, phi)
        except (GeometryError, FunctionalError, LatticeError) as e:
            raise CheckpointError(f"checkpoint does not describe an admissible state: {e}") from e
        return FlowState(t=self.t, phi=phi, bg=bg, metric=metric, step=self.step,
                         renorm_correction=self.renorm_correction)


def write_checkpoint(
    path: Union[str, Path],
    state: FlowState,
    recipe: MetricRecipe,
    dt: float,
    integrator: str,
    rng_seed: int = 0,
) -> Path:
    """
    Write state to path.

    Raises:
        CheckpointError: the file cannot be written
    """
    path = Path(path)
    grid = state.bg.grid
    phi = np.ascontiguousarray(state.phi.real, dtype=BLOCK_DTYPE)
    omega0 = np.ascontiguousarray(state.bg.omega0.components)
    metric_block = omega0.view(np.float64).astype(BLOCK_DTYPE)

    header = {
        "format_version": str(FORMAT_VERSION),
        "n": str(grid.n),
        "points_per_axis": str(grid.N),
        "period": float(grid.L).hex(),
        "recipe_fingerprint": recipe.fingerprint(),
        "recipe": recipe.canonical_json(),
        "t": float(state.t).hex(),
        "dt": float(dt).hex(),
        "step": str(state.step),
        "integrator": integrator,
        "rng_seed": str(rng_seed),
        "renorm_correction": float(state.renorm_correction).hex(),
        "phi_count": str(phi.size),
        "metric_count": str(metric_block.size),
        "byte_order": "little",
    }
    lines = [MAGIC] + [f"{key}={header[key]}" for key in HEADER_KEYS] + [END_HEADER]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(("\n".join(lines) + "\n").encode("utf-8"))
            f.write(phi.tobytes(order="C"))
            f.write(metric_block.tobytes(order="C"))
    except OSError as e:
        raise CheckpointError(f"cannot write checkpoint {path}: {e}") from e
    logger.info(f"[Checkpoint] Wrote {path.name}: step={state.step}, t={state.t:.6g}")
    return path


def _parse_header(data: bytes) -> Tuple[Dict[str, str], int]:
    lines = []
    offset = 0
    while True:
        end = data.find(b"\n", offset)
        if end < 0:
            raise CheckpointError("truncated header (no END_HEADER line)")
        line = data[offset:end].decode("utf-8", errors="replace")
        offset = end + 1
        if line == END_HEADER:
            break
        lines.append(line)
    if not lines or lines[0] != MAGIC:
        raise CheckpointError("not a checkpoint file (bad magic line)")
    header = {}
    for line in lines[1:]:
        if "=" not in line:
            raise CheckpointError(f"malformed header line {line!r}")
        key, value = line.split("=", 1)
        header[key] = value
    missing = [key for key in HEADER_KEYS if key not in header]
    if missing:
        raise CheckpointError(f"header is missing {missing}")
    return header, offset


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Read and validate a checkpoint.

    Raises:
        CheckpointError: unreadable file, version mismatch, length mismatch,
            NaN or infinite values
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e

    header, offset = _parse_header(data)
    if header["format_version"] != str(FORMAT_VERSION):
        raise CheckpointError(
            f"format version {header['format_version']} not supported (expected {FORMAT_VERSION})"
        )
    if header["byte_order"] != "little":
        raise CheckpointError(f"unsupported byte order {header['byte_order']!r}")

    try:
        spec = GridSpec(int(header["n"]), int(header["points_per_axis"]),
                        float.fromhex(header["period"]))
        spec.validate()
        recipe = MetricRecipe.from_dict(json.loads(header["recipe"]))
        phi_count = int(header["phi_count"])
        metric_count = int(header["metric_count"])
        t = float.fromhex(header["t"])
        dt = float.fromhex(header["dt"])
        renorm = float.fromhex(header["renorm_correction"])
        step = int(header["step"])
        rng_seed = int(header["rng_seed"])
    except (ValueError, LatticeError, RecipeError) as e:
        raise CheckpointError(f"malformed header value: {e}") from e
    if recipe.fingerprint() != header["recipe_fingerprint"]:
        raise CheckpointError("recipe does not match its fingerprint")

    sites = spec.points_per_axis ** (2 * spec.n)
    if phi_count != sites or metric_count != 2 * spec.n ** 2 * sites:
        raise CheckpointError(
            f"block lengths {phi_count}/{metric_count} do not match the grid "
            f"({sites} sites, n={spec.n})"
        )
    expected = offset + (phi_count + metric_count) * BLOCK_DTYPE.itemsize
    if len(data) != expected:
        raise CheckpointError(f"file length {len(data)} bytes, expected {expected} (truncated or padded)")

    phi = np.frombuffer(data, dtype=BLOCK_DTYPE, count=phi_count, offset=offset)
    metric_block = np.frombuffer(data, dtype=BLOCK_DTYPE, count=metric_count,
                                 offset=offset + phi_count * BLOCK_DTYPE.itemsize)
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(metric_block))):
        raise CheckpointError("checkpoint contains NaN or infinite values")

    shape = (spec.points_per_axis,) * (2 * spec.n)
    omega0 = metric_block.astype(np.float64).view(np.complex128).reshape((spec.n, spec.n) + shape)
    logger.info(f"[Checkpoint] Read {path.name}: step={step}, t={t:.6g}")
    return Checkpoint(
        grid=spec,
        recipe=recipe,
        t=t,
        dt=dt,
        step=step,
        integrator=header["integrator"],
        rng_seed=rng_seed,
        renorm_correction=renorm,
        phi=phi.astype(np.float64).reshape(shape),
        omega0=omega0.copy(),
    )

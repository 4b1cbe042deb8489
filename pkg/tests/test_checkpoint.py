"""
Tests for binary checkpoints and resumed runs.
"""

import numpy as np
import pytest

from src.cli import CheckpointError, read_checkpoint, write_checkpoint
from src.cli.checkpoint import MAGIC
from src.flow import FlowConfig, run, run_from_state
from src.lattice import GridSpec, make_grid
from src.metricgen import MetricRecipe

RECIPE = MetricRecipe(kind="conformal", amplitude=0.1, max_mode=1, profile="sine")


def _cfg(max_steps):
    return FlowConfig(dt=1e-3, max_steps=max_steps, scalar_curv_tol=1e-12,
                      initial_amplitude=0.01, initial_seed=3)


@pytest.fixture
def grid16():
    return make_grid(GridSpec(1, 16))


@pytest.fixture
def half_run(grid16):
    return run(RECIPE, _cfg(6), grid16)


@pytest.fixture
def checkpoint_file(tmp_path, half_run):
    return write_checkpoint(tmp_path / "ckpt" / "step_6.ckpt", half_run.final_state, RECIPE,
                            dt=1e-3, integrator="imex", rng_seed=3)


def _rewrite(path, old: bytes, new: bytes):
    data = path.read_bytes()
    assert old in data
    path.write_bytes(data.replace(old, new, 1))


class TestRoundTrip:
    """Tests for write_checkpoint followed by read_checkpoint."""

    def test_fields_are_bit_exact(self, checkpoint_file, half_run):
        state = half_run.final_state
        ckpt = read_checkpoint(checkpoint_file)
        assert np.array_equal(ckpt.phi, state.phi.real)
        assert np.array_equal(ckpt.omega0, state.bg.omega0.components)
        assert ckpt.t == state.t
        assert ckpt.step == 6
        assert ckpt.renorm_correction == state.renorm_correction

    def test_header_values(self, checkpoint_file):
        ckpt = read_checkpoint(checkpoint_file)
        assert ckpt.grid == GridSpec(1, 16)
        assert ckpt.recipe == RECIPE
        assert ckpt.dt == 1e-3
        assert ckpt.integrator == "imex"
        assert ckpt.rng_seed == 3

    def test_file_starts_with_magic(self, checkpoint_file):
        assert checkpoint_file.read_bytes().startswith(MAGIC.encode("utf-8"))

    def test_resume_equals_uninterrupted_run(self, checkpoint_file, grid16):
        full = run(RECIPE, _cfg(12), grid16)
        restored = read_checkpoint(checkpoint_file).to_state()
        resumed = run_from_state(restored, _cfg(12))
        assert resumed.final_state.step == 12
        assert np.array_equal(resumed.final_state.phi.real, full.final_state.phi.real)
        assert resumed.records[-1].mab == full.records[-1].mab

    def test_unwritable_path(self, tmp_path, half_run):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(CheckpointError):
            write_checkpoint(blocker / "sub" / "a.ckpt", half_run.final_state, RECIPE, 1e-3, "imex")


class TestCorruptFiles:
    """Every damaged file is rejected with CheckpointError."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointError):
            read_checkpoint(tmp_path / "absent.ckpt")

    def test_truncated_blocks(self, checkpoint_file):
        checkpoint_file.write_bytes(checkpoint_file.read_bytes()[:-8])
        with pytest.raises(CheckpointError, match="truncated"):
            read_checkpoint(checkpoint_file)

    def test_truncated_header(self, checkpoint_file):
        checkpoint_file.write_bytes(checkpoint_file.read_bytes()[:40])
        with pytest.raises(CheckpointError):
            read_checkpoint(checkpoint_file)

    def test_bad_magic(self, checkpoint_file):
        _rewrite(checkpoint_file, MAGIC.encode("utf-8"), b"SOMETHING-ELSE")
        with pytest.raises(CheckpointError, match="magic"):
            read_checkpoint(checkpoint_file)

    def test_version_mismatch(self, checkpoint_file):
        _rewrite(checkpoint_file, b"format_version=1", b"format_version=9")
        with pytest.raises(CheckpointError, match="version"):
            read_checkpoint(checkpoint_file)

    def test_fingerprint_mismatch(self, checkpoint_file):
        fingerprint = RECIPE.fingerprint().encode("ascii")
        _rewrite(checkpoint_file, fingerprint, b"0" * len(fingerprint))
        with pytest.raises(CheckpointError, match="fingerprint"):
            read_checkpoint(checkpoint_file)

    def test_non_finite_values(self, checkpoint_file):
        data = bytearray(checkpoint_file.read_bytes())
        data[-8:] = np.array([np.nan], dtype="<f8").tobytes()
        checkpoint_file.write_bytes(bytes(data))
        with pytest.raises(CheckpointError, match="NaN"):
            read_checkpoint(checkpoint_file)

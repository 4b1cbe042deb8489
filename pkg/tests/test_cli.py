"""
Tests for the chern-flow command line: exit codes and output files.
"""

import json

import pytest

from src.cli import create_parser, main, read_checkpoint
from src.cli.config import (
    EXIT_CONFIG_ERROR,
    EXIT_DEGENERACY,
    EXIT_DISK_ERROR,
    EXIT_MAX_STEPS,
    EXIT_SUCCESS,
    EXIT_T_MAX,
)
from src.cli.output_writer import read_trajectory_csv
from src.flow import CSV_COLUMNS

FLAT = "n = 1\npoints_per_axis = 16\nrecipe.kind = flat\n"
CONFORMAL = (
    "n = 1\npoints_per_axis = 16\nrecipe.kind = conformal\nrecipe.profile = sine\n"
    "recipe.amplitude = 0.1\nrecipe.max_mode = 1\n"
)
SURFACE = (
    "n = 2\npoints_per_axis = 16\nrecipe.kind = random_pluriclosed\nrecipe.seed = 4\n"
    "recipe.amplitude = 0.1\nrecipe.max_mode = 4\nverify.seeds = 1\n"
)


@pytest.fixture
def out_dir(tmp_path):
    """Output directory set by the isolate_environment fixture."""
    return tmp_path / "out"


@pytest.fixture
def write_config(tmp_path):
    def _write(text, filename="run.conf"):
        path = tmp_path / filename
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


class TestParser:
    """Tests for argument parsing."""

    def test_subcommands(self):
        parser = create_parser()
        for command in ("run", "verify", "gen"):
            args = parser.parse_args([command, "x.conf", "-o", "elsewhere"])
            assert args.command == command
            assert args.config == "x.conf"
            assert args.output_dir == "elsewhere"

    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_SUCCESS
        assert "chern-flow" in capsys.readouterr().out


class TestRunCommand:
    """Tests for `run` exit codes and outputs."""

    def test_max_steps(self, write_config, out_dir):
        path = write_config(CONFORMAL + "flow.dt = 1e-3\nflow.max_steps = 4\nname = capped\n")
        assert main(["run", path]) == EXIT_MAX_STEPS
        rows = read_trajectory_csv(out_dir / "capped" / "trajectory.csv")
        assert len(rows) == 5
        assert rows[-1]["t"] == pytest.approx(4e-3)

    def test_csv_header(self, write_config, out_dir):
        path = write_config(FLAT + "flow.max_steps = 2\nname = header\n")
        main(["run", path])
        header = (out_dir / "header" / "trajectory.csv").read_text(encoding="utf-8").splitlines()[0]
        assert tuple(header.split(",")) == CSV_COLUMNS

    def test_t_max(self, write_config):
        path = write_config(FLAT + "flow.dt = 1e-3\nflow.t_max = 3e-3\nflow.initial_amplitude = 0.01\n")
        assert main(["run", path]) == EXIT_T_MAX

    def test_converged(self, write_config, out_dir):
        path = write_config(FLAT + (
            "flow.max_steps = 2000\nflow.scalar_curv_tol = 1e-6\nflow.initial_amplitude = 0.01\n"
            "name = converged\n"
        ))
        assert main(["run", path]) == EXIT_SUCCESS
        document = json.loads((out_dir / "converged" / "summary.json").read_text(encoding="utf-8"))
        assert document["schema_version"] == "1.0"
        assert document["summary"]["stop_reason"] == "scalar_curv_tol"
        assert document["recipe"]["kind"] == "flat"
        assert document["resumed_from"] is None

    def test_degeneracy(self, write_config, capsys):
        path = write_config(FLAT + "flow.min_eigen_guard = 0.9999\nflow.initial_amplitude = 0.01\n")
        assert main(["run", path]) == EXIT_DEGENERACY
        assert "Abort:" in capsys.readouterr().err

    def test_bad_config(self, write_config, capsys):
        path = write_config(FLAT + "flow.colour = red\n")
        assert main(["run", path]) == EXIT_CONFIG_ERROR
        assert "unknown key" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["run", str(tmp_path / "absent.conf")]) == EXIT_CONFIG_ERROR

    def test_inadmissible_initial_potential(self, write_config):
        path = write_config(FLAT + "flow.initial_amplitude = 5\nflow.initial_max_mode = 5\n")
        assert main(["run", path]) == EXIT_CONFIG_ERROR

    def test_emit_flags(self, write_config, out_dir):
        path = write_config(FLAT + (
            "flow.max_steps = 1\nflow.initial_amplitude = 0.01\n"
            "emit.csv = false\nemit.summary = false\nname = quiet\n"
        ))
        assert main(["run", path]) == EXIT_MAX_STEPS
        assert not (out_dir / "quiet" / "trajectory.csv").exists()
        assert not (out_dir / "quiet" / "summary.json").exists()


class TestResume:
    """Tests for checkpoints written by `run` and resumed runs."""

    def test_checkpoints_and_resume(self, write_config, out_dir):
        body = CONFORMAL + "flow.dt = 1e-3\nflow.initial_amplitude = 0.01\n"
        first = write_config(body + (
            "flow.max_steps = 6\nemit.checkpoints = true\nemit.checkpoint_every = 3\nname = first\n"
        ), "first.conf")
        assert main(["run", first]) == EXIT_MAX_STEPS
        checkpoints = sorted((out_dir / "first" / "checkpoints").glob("*.ckpt"))
        assert [p.name for p in checkpoints] == ["step_00000003.ckpt", "step_00000006.ckpt"]

        resumed = write_config(body + f"flow.max_steps = 6\nresume_from = {checkpoints[0]}\nname = resumed\n",
                               "resumed.conf")
        assert main(["run", resumed]) == EXIT_MAX_STEPS
        a = read_trajectory_csv(out_dir / "first" / "trajectory.csv")[-1]
        b = read_trajectory_csv(out_dir / "resumed" / "trajectory.csv")[-1]
        assert a == b
        summary = json.loads((out_dir / "resumed" / "summary.json").read_text(encoding="utf-8"))
        assert summary["resumed_from"] == str(checkpoints[0])

    def test_resume_with_other_recipe(self, write_config, out_dir):
        first = write_config(CONFORMAL + "flow.max_steps = 1\nemit.checkpoints = true\nname = a\n", "a.conf")
        main(["run", first])
        checkpoint = next((out_dir / "a" / "checkpoints").glob("*.ckpt"))
        other = write_config(FLAT + f"resume_from = {checkpoint}\n", "b.conf")
        assert main(["run", other]) == EXIT_CONFIG_ERROR

    def test_resume_from_corrupt_checkpoint(self, write_config, tmp_path):
        broken = tmp_path / "broken.ckpt"
        broken.write_bytes(b"not a checkpoint\n")
        path = write_config(FLAT + f"resume_from = {broken}\n")
        assert main(["run", path]) == EXIT_DISK_ERROR


class TestGenCommand:
    """Tests for `gen`."""

    def test_writes_checkpoint_and_description(self, write_config, out_dir):
        path = write_config(
            "n = 2\npoints_per_axis = 8\nrecipe.kind = constant_det_fixture\n"
            "recipe.epsilon = 0.3\nrecipe.mode = 1\nname = fixture\n"
        )
        assert main(["gen", path]) == EXIT_SUCCESS
        ckpt = read_checkpoint(out_dir / "fixtures" / "fixture.ckpt")
        assert ckpt.step == 0
        assert not ckpt.phi.any()
        description = json.loads((out_dir / "fixtures" / "fixture.json").read_text(encoding="utf-8"))
        assert description["det_max"] - description["det_min"] < 1e-12
        assert description["torsion_sup"] > 0.1
        assert description["fingerprint"] == ckpt.recipe.fingerprint()

    def test_bad_recipe(self, write_config):
        path = write_config("n = 1\npoints_per_axis = 16\nrecipe.kind = random_pluriclosed\n")
        assert main(["gen", path]) == EXIT_CONFIG_ERROR


class TestVerifyCommand:
    """Tests for `verify`."""

    def test_identities_pass(self, write_config, out_dir):
        path = write_config(SURFACE + "name = suite\n")
        assert main(["verify", path]) == EXIT_SUCCESS
        reports = sorted((out_dir / "reports").glob("identity_report_suite_*.json"))
        assert len(reports) == 1
        document = json.loads(reports[0].read_text(encoding="utf-8"))
        assert document["negative_control"] is False
        assert document["report"]["all_passed"] is True
        summary = json.loads((out_dir / "reports" / "verify_suite.json").read_text(encoding="utf-8"))
        assert summary["identity_failures"] == 0

    def test_negative_control(self, write_config, out_dir):
        path = write_config(SURFACE + "verify.negative_control = true\nname = broken\n")
        assert main(["verify", path]) == EXIT_SUCCESS
        summary = json.loads((out_dir / "reports" / "verify_broken.json").read_text(encoding="utf-8"))
        assert summary["control_failures"] == 0
        assert summary["fixtures"][0]["failures"]

    def test_negative_control_needs_surface(self, write_config):
        path = write_config(CONFORMAL + "verify.negative_control = true\n")
        assert main(["verify", path]) == EXIT_CONFIG_ERROR

"""Tests related to the `homoclinic` program."""
import dataclasses
import json
import math

import pytest

from covers import __version__
from covers.acceptance import CRITERIA
from covers.cli import COMMANDS, build_parser


class TestParser:
    """Tests related to `build_parser`."""

    def test_every_command_registered(self):
        """Each command is reachable under its name or group."""
        parser = build_parser()
        for command_class in COMMANDS:
            command = command_class()
            argv = [command.get_name()]
            if command.group is not None:
                argv.insert(0, command.group)
            namespace, _ = parser.parse_known_args(argv)
            assert isinstance(namespace.handler, command_class)

    def test_every_command_states_its_result(self):
        """Each command names the statement it checks in its long help."""
        for command_class in COMMANDS:
            command = command_class()
            assert command.result, command_class.__name__
            assert command.get_description().endswith(f"Result: {command.result}")

    def test_version(self, run_cli, capsys):
        """--version prints the version and exits cleanly."""
        code, _ = run_cli("--version")
        assert code == 0
        assert __version__ in capsys.readouterr().out

    def test_help(self, run_cli, capsys):
        """Subcommand help exits cleanly."""
        code, _ = run_cli("classify", "--help")
        assert code == 0
        out = capsys.readouterr().out
        assert "homoclinic classify" in out
        assert "Result:" in out

    @pytest.mark.parametrize(
        "argv",
        [(), ("nonsense",), ("pseudo",), ("periodic", "u^2-u-1", "--kmax", "two")],
    )
    def test_usage_errors(self, run_cli, capsys, argv):
        """Usage errors exit with 1 and a message on stderr."""
        code, out = run_cli(*argv)
        assert code == 1
        assert out == ""
        assert "homoclinic: error:" in capsys.readouterr().err


class TestExitCodes:
    """Tests related to exit codes."""

    def test_success(self, run_cli):
        """A finished command exits with 0."""
        code, out = run_cli("classify", "u^2-3u+1")
        assert code == 0
        assert out.startswith("hyperbolic")

    @pytest.mark.parametrize(
        "argv",
        [
            ("classify", "u^^2"),
            ("classify",),
            ("periodic", "u^2+u+1"),
            ("periodic", "u^2-u-1", "--kmax", "0"),
            ("decode", "5u^2-6u+5", "--symbols", "1"),
        ],
    )
    def test_configuration_errors(self, run_cli, capsys, argv):
        """Bad input exits with 1."""
        code, _ = run_cli(*argv)
        assert code == 1
        assert capsys.readouterr().err.startswith("homoclinic: error:")

    def test_numerical_error(self, run_cli, capsys):
        """A root that cannot be placed exits with 2."""
        code, _ = run_cli("classify", "u^2-u-1", "--tol", "0.5")
        assert code == 2
        assert "unit circle" in capsys.readouterr().err

    def test_acceptance_failure(self, run_cli, monkeypatch):
        """A failed criterion exits with 3."""

        def failing(rng, quick):
            """Always fail."""
            return False, "forced"

        monkeypatch.setitem(CRITERIA, 1, dataclasses.replace(CRITERIA[1], check=failing))
        code, out = run_cli("acceptance", "--only", "1")
        assert code == 3
        assert "0/1 criteria passed; failed: 1" in out


class TestArtifacts:
    """Tests related to artifact output."""

    def test_csv_stdout(self, run_cli):
        """--csv alone writes the table to stdout."""
        code, out = run_cli("periodic", "u^2-u-1", "--kmax", "4", "--csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# covers periodic v1"
        assert lines[1] == "k,count,log_rate"
        assert [line.split(",")[1] for line in lines[2:]] == ["1", "1", "4", "5"]
        assert float(lines[4].split(",")[2]) == pytest.approx(math.log(4) / 3)

    def test_csv_path(self, run_cli, tmp_path):
        """--csv PATH writes the table there and prints the summary."""
        path = tmp_path / "periodic.csv"
        code, out = run_cli("periodic", "u^2-u-1", "--kmax", "3", "--csv", str(path))
        assert code == 0
        assert out.startswith("(1/3) log P_3")
        assert path.read_text().startswith("# covers periodic v1\n")

    def test_json_output(self, run_cli, tmp_path):
        """A .json output path selects JSON."""
        path = tmp_path / "classify.json"
        code, _ = run_cli("classify", "u^2-3u+1", "--output", str(path))
        assert code == 0
        document = json.loads(path.read_text())
        assert document["format"] == "covers classify v1"
        assert document["meta"]["expansive"] is True
        assert len(document["rows"]) == 2

    def test_grouped_header(self, run_cli):
        """Grouped commands carry the group in the format tag."""
        code, out = run_cli(
            "pseudo", "no-homoclinic", "5u^2-6u+5", "--trials", "3", "--format", "json"
        )
        assert code == 0
        assert json.loads(out)["format"] == "covers pseudo-no-homoclinic v1"

    def test_unwritable(self, run_cli, tmp_path):
        """An output path that cannot be written is a configuration error."""
        code, _ = run_cli(
            "classify", "u^2-3u+1", "--output", str(tmp_path / "missing" / "out.csv")
        )
        assert code == 1


class TestConfiguration:
    """Tests related to configuration from files and the environment."""

    def test_config_file(self, run_cli, tmp_path):
        """The config file supplies the polynomial."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"poly": "u^2-u-1"}))
        code, out = run_cli("--config", str(path), "entropy")
        assert code == 0
        assert f"{math.log((1 + math.sqrt(5)) / 2):.9f}" in out

    def test_config_window(self, run_cli, tmp_path):
        """A window below twice the span is refused."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"window": 3}))
        code, _ = run_cli("--config", str(path), "homoclinic", "u^4-u^3-u^2-u+1")
        assert code == 1

    def test_seed_environment(self, run_cli, monkeypatch):
        """HOMOCLINIC_SEED matches --seed."""
        argv = ("roundtrip", "u^2-3u+1", "--trials", "2", "--window", "32", "--csv")
        _, with_flag = run_cli(*argv, "--seed", "5")
        monkeypatch.setenv("HOMOCLINIC_SEED", "5")
        _, with_env = run_cli(*argv)
        assert with_flag == with_env

    def test_deterministic(self, run_cli):
        """The same seed gives byte-identical artifacts."""
        argv = ("pseudo", "zf-entropy", "u^4-u^3-u^2-u+1", "-N", "5", "--samples", "300", "--csv")
        first = run_cli(*argv, "--seed", "11")
        assert run_cli(*argv, "--seed", "11") == first

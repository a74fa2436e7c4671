"""Tests related to the run configuration."""
import json
import logging
from pathlib import Path

import pytest

from covers.config import (
    SEED_ENV,
    OutputFormat,
    RunConfig,
    build_config,
    configure_logging,
    load_config_file,
)
from covers.exceptions import HomoclinicConfigurationError
from covers.laurent import parse_poly


class TestRunConfig:
    """Tests related to `RunConfig`."""

    def test_defaults(self):
        """Defaults match the documented values."""
        config = RunConfig()
        assert config.tol == 1e-9
        assert config.window == 64
        assert config.quad_points == 200
        assert config.trials == 100
        assert config.seed == 0
        assert config.output is None
        assert config.format is None

    @pytest.mark.parametrize(
        "kwargs", [{"tol": 0}, {"window": 0}, {"trials": -1}, {"quad_points": 0}]
    )
    def test_invalid(self, kwargs):
        """Non-positive settings are refused and named."""
        with pytest.raises(HomoclinicConfigurationError, match="RunConfig"):
            RunConfig(**kwargs)

    def test_validate(self):
        """The window must cover twice the span of f."""
        f = parse_poly("u^4-u^3-u^2-u+1")
        assert RunConfig(window=8).validate(f).window == 8
        with pytest.raises(HomoclinicConfigurationError, match="window"):
            RunConfig(window=7).validate(f)

    def test_merged(self):
        """Known keys are coerced, unknown keys become options, None is skipped."""
        config = RunConfig().merged(
            {"window": "32", "format": "json", "output": "out.json", "kmax": 5, "tol": None}
        )
        assert config.window == 32
        assert config.format is OutputFormat.JSON
        assert config.output == Path("out.json")
        assert config.tol == 1e-9
        assert config.option("kmax") == 5
        assert config.option("missing", 7) == 7

    def test_merged_invalid(self):
        """Values that do not coerce are configuration errors."""
        with pytest.raises(HomoclinicConfigurationError, match="window"):
            RunConfig().merged({"window": "wide"})
        with pytest.raises(HomoclinicConfigurationError):
            RunConfig().merged({"format": "xml"})


class TestConfigFile:
    """Tests related to `load_config_file`."""

    def test_dashes(self, tmp_path):
        """Keys may be written with dashes."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"quad-points": 50, "poly": "u^2-u-1"}))
        assert load_config_file(path) == {"quad_points": 50, "poly": "u^2-u-1"}

    @pytest.mark.parametrize(
        ("content", "message"),
        [("{", "not valid JSON"), ("[1, 2]", "JSON object")],
    )
    def test_bad_files(self, tmp_path, content, message):
        """Broken or non-object files are refused."""
        path = tmp_path / "run.json"
        path.write_text(content)
        with pytest.raises(HomoclinicConfigurationError, match=message):
            load_config_file(path)

    def test_missing(self, tmp_path):
        """A missing file is a configuration error."""
        with pytest.raises(HomoclinicConfigurationError, match="Cannot read"):
            load_config_file(tmp_path / "missing.json")


class TestBuildConfig:
    """Tests related to `build_config`."""

    def test_precedence(self, tmp_path):
        """Flags beat the file, which beats the defaults."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"window": 32, "trials": 10}))
        config = build_config({"window": 16, "trials": None}, path, environ={})
        assert config.window == 16
        assert config.trials == 10

    def test_seed_from_environment(self):
        """The environment seeds runs without a --seed."""
        assert build_config({}, environ={SEED_ENV: "17"}).seed == 17
        assert build_config({"seed": 3}, environ={SEED_ENV: "17"}).seed == 3

    def test_seed_file_beats_environment(self, tmp_path):
        """A seed in the config file wins over the environment."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 5}))
        assert build_config({}, path, environ={SEED_ENV: "17"}).seed == 5


@pytest.mark.parametrize(
    ("verbosity", "level"), [(0, logging.WARNING), (1, logging.INFO), (3, logging.DEBUG)]
)
def test_configure_logging(verbosity, level):
    """Each -v lowers the root level."""
    configure_logging(verbosity)
    assert logging.getLogger().level == level

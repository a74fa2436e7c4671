"""Run configuration: defaults, a JSON config file, then command-line flags."""

from __future__ import annotations

import enum
import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

from covers.exceptions import HomoclinicConfigurationError

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Mapping

    from covers.laurent import LaurentPoly

__all__: list[str] = [
    "SEED_ENV",
    "OutputFormat",
    "RunConfig",
    "build_config",
    "configure_logging",
    "load_config_file",
]

logger = logging.getLogger(__name__)

SEED_ENV: str = "HOMOCLINIC_SEED"
LOG_FORMAT: str = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class OutputFormat(enum.Enum):
    """Artifact formats."""

    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command.

    Command-specific options live in `extra`.
    """

    poly: str | None = None
    tol: float = 1e-9
    window: int = 64
    quad_points: int = 200
    trials: int = 100
    seed: int = 0
    output: Path | None = None
    format: OutputFormat | None = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate the numeric settings."""
        _class = self.__class__.__name__
        if self.tol <= 0:
            _err_msg = f"{_class}.tol must be positive, got {self.tol}."
            raise HomoclinicConfigurationError(_err_msg)
        for name in ("window", "trials", "quad_points"):
            if getattr(self, name) < 1:
                _err_msg = f"{_class}.{name} must be at least 1, got {getattr(self, name)}."
                raise HomoclinicConfigurationError(_err_msg)

    def validate(self, f: LaurentPoly) -> RunConfig:
        """Check the window against the span of f."""
        if self.window < 2 * f.span:
            _class = self.__class__.__name__
            _err_msg = f"{_class}.window = {self.window} is below 2·deg f = {2 * f.span} for {f}."
            raise HomoclinicConfigurationError(_err_msg)
        return self

    def option(self, name: str, default: Any = None) -> Any:
        """A command-specific option, or `default`."""
        value = self.extra.get(name)
        return default if value is None else value

    def merged(self, overrides: Mapping[str, Any]) -> RunConfig:
        """A copy with the non-None overrides applied."""
        known = {f.name for f in fields(self)} - {"extra"}
        updates: dict[str, Any] = {}
        extra = dict(self.extra)
        for key, value in overrides.items():
            if value is None:
                continue
            if key in known:
                updates[key] = _coerce(key, value)
            else:
                extra[key] = value
        return replace(self, **updates, extra=extra)


def _coerce(key: str, value: Any) -> Any:
    try:
        if key == "output":
            return Path(value)
        if key == "format":
            return OutputFormat(value)
        if key in ("window", "trials", "quad_points", "seed"):
            return int(value)
        if key == "tol":
            return float(value)
    except (TypeError, ValueError) as exc:
        _err_msg = f"Invalid value {value!r} for {key}."
        raise HomoclinicConfigurationError(_err_msg) from exc
    return value


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a JSON object of settings."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        _err_msg = f"Cannot read config file {path}: {exc.strerror}."
        raise HomoclinicConfigurationError(_err_msg) from exc
    except json.JSONDecodeError as exc:
        _err_msg = f"Config file {path} is not valid JSON: {exc.msg}."
        raise HomoclinicConfigurationError(_err_msg) from exc
    if not isinstance(data, dict):
        _err_msg = f"Config file {path} must hold a JSON object."
        raise HomoclinicConfigurationError(_err_msg)
    return {key.replace("-", "_"): value for key, value in data.items()}


def build_config(
    flags: Mapping[str, Any],
    config_path: Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """Defaults, then the config file, then flags; the seed falls back to the environment."""
    environ = os.environ if environ is None else environ
    file_values = load_config_file(config_path) if config_path else {}
    config = RunConfig().merged(file_values)
    if flags.get("seed") is None and "seed" not in file_values and SEED_ENV in environ:
        config = config.merged({"seed": environ[SEED_ENV]})
    config = config.merged(flags)
    logger.debug("run configuration: %s", config)
    return config


def configure_logging(verbosity: int) -> None:
    """WARNING by default, INFO with -v, DEBUG with -vv."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)

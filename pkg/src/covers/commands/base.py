"""Base command class and the option mixins commands are built from."""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from covers.config import OutputFormat
from covers.exceptions import HomoclinicConfigurationError
from covers.homoclinic import HomoclinicData, build_homoclinic
from covers.laurent import LaurentPoly, parse_poly
from covers.spectra import Spectrum, compute_spectrum

if TYPE_CHECKING:  # pragma: no cover
    import argparse
    from collections.abc import Sequence
    from typing import TextIO

    from covers.config import RunConfig

__all__: list[str] = [
    "Artifact",
    "Command",
    "OutputMixin",
    "PolynomialMixin",
    "SeedMixin",
    "ToleranceMixin",
    "TrialsMixin",
    "WindowMixin",
    "float_list",
    "int_list",
]

logger = logging.getLogger(__name__)

FORMAT_VERSION: int = 1


def int_list(text: str) -> list[int]:
    """Parse "1,0,-1" or "-2..2" into integers."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        _err_msg = f"Expected integers like '1,0,-1' or '-2..2', got {text!r}."
        raise HomoclinicConfigurationError(_err_msg) from exc


def float_list(text: str) -> list[float]:
    """Parse "0.1,0.25" into floats."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        _err_msg = f"Expected numbers like '0.1,0.25', got {text!r}."
        raise HomoclinicConfigurationError(_err_msg) from exc


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return repr(float(value))
    if isinstance(value, complex | np.complexfloating):
        return repr(complex(value))
    return str(value)


def _json_default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex | np.complexfloating):
        return [float(value.real), float(value.imag)]
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    _err_msg = f"Cannot write {type(value).__name__} to JSON."
    raise TypeError(_err_msg)


@dataclass
class Artifact:
    """A table of results plus the one-line summary printed to the terminal."""

    command: str
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]] = field(default_factory=list)
    summary: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def header(self) -> str:
        """Versioned format tag, e.g. "covers periodic v1"."""
        return f"covers {self.command} v{FORMAT_VERSION}"

    def to_csv(self) -> str:
        """Comment line, column header, then one line per row."""
        buffer = io.StringIO()
        buffer.write(f"# {self.header}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows([_cell(v) for v in row] for row in self.rows)
        return buffer.getvalue()

    def to_json(self) -> str:
        """The same table as a JSON document."""
        document = {
            "format": self.header,
            "columns": list(self.columns),
            "rows": [dict(zip(self.columns, row)) for row in self.rows],
            "summary": self.summary,
            "meta": self.meta,
        }
        return json.dumps(document, indent=2, sort_keys=True, default=_json_default) + "\n"

    def render(self, fmt: OutputFormat) -> str:
        """Text in the requested format."""
        return self.to_json() if fmt is OutputFormat.JSON else self.to_csv()


class Command:
    """A subcommand of the `homoclinic` program.

    Subclasses set `name` and `help` and implement `handle`; `result` names
    the statement the command checks. Options are added by mixins, which
    extend `add_arguments` cooperatively.
    """

    name: str = ""
    group: str | None = None
    help: str = ""
    description: str = ""
    result: str = ""

    def get_name(self) -> str:
        """The subcommand name."""
        if not self.name:
            _class = self.__class__.__name__
            _err_msg = (
                f"{_class} is missing the `name` attribute. "
                f"Define `{_class}.name` or override `{_class}.get_name()`."
            )
            raise HomoclinicConfigurationError(_err_msg)
        return self.name

    def get_description(self) -> str:
        """Long help text; falls back to `help`, then states `result` if set."""
        text = self.description or self.help
        return f"{text} Result: {self.result}" if self.result else text

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Register the command's options."""

    def handle(self, config: RunConfig) -> Artifact:
        """Compute the command's artifact."""
        raise NotImplementedError

    def emit(self, artifact: Artifact, config: RunConfig, stream: TextIO) -> None:  # noqa: ARG002
        """Print the summary line."""
        stream.write(artifact.summary + "\n")

    def run(self, config: RunConfig, stream: TextIO) -> Artifact:
        """Handle the command and emit its artifact."""
        artifact = self.handle(config)
        self.emit(artifact, config, stream)
        return artifact

    def artifact(
        self,
        columns: Sequence[str],
        rows: list[tuple[Any, ...]],
        summary: str,
        **meta: Any,
    ) -> Artifact:
        """Build an artifact tagged with this command's name."""
        name = self.get_name() if self.group is None else f"{self.group}-{self.get_name()}"
        return Artifact(name, tuple(columns), rows, summary, dict(meta))


class PolynomialMixin:
    """Reads the polynomial f from the command line or the config file."""

    poly: str | None = None

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the positional polynomial."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument(
            "poly",
            nargs="?",
            default=None,
            help="polynomial in u, e.g. 'u^2-u-1', or coefficients 'f_0,...,f_m'",
        )

    def get_poly(self, config: RunConfig) -> LaurentPoly:
        """The parsed polynomial, checked against the window."""
        text = config.poly or self.poly
        if not text:
            _class = self.__class__.__name__
            _err_msg = (
                f"{_class} is missing a polynomial. Pass one on the command line, "
                f"set `poly` in the config file, or override `{_class}.get_poly()`."
            )
            raise HomoclinicConfigurationError(_err_msg)
        f = parse_poly(text)
        config.validate(f)
        return f

    def get_spectrum(self, config: RunConfig) -> Spectrum:
        """The spectrum of f at the configured tolerance."""
        return compute_spectrum(self.get_poly(config), config.tol, config.quad_points)

    def get_homoclinic(
        self, config: RunConfig, spectrum: Spectrum | None = None
    ) -> HomoclinicData:
        """Homoclinic data for f on the configured window."""
        f = self.get_poly(config)
        spectrum = self.get_spectrum(config) if spectrum is None else spectrum
        return build_homoclinic(f, spectrum, config.window, tol=config.tol)


class ToleranceMixin:
    """Adds `--tol`."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the tolerance flag."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument("--tol", type=float, default=None, help="numerical tolerance (1e-9)")


class WindowMixin:
    """Adds `--window`."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the window flag."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument(
            "--window", type=int, default=None, help="half-width of sequence windows (64)"
        )


class SeedMixin:
    """Adds `--seed` and hands out generators derived from it."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the seed flag."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument(
            "--seed", type=int, default=None, help="random seed (HOMOCLINIC_SEED, then 0)"
        )

    def get_rng(self, config: RunConfig) -> np.random.Generator:
        """A generator seeded from the configuration."""
        return np.random.default_rng(config.seed)

    def get_trial_rngs(self, config: RunConfig, count: int) -> list[np.random.Generator]:
        """Independent generators, one per trial."""
        children = np.random.SeedSequence(config.seed).spawn(count)
        return [np.random.default_rng(child) for child in children]


class TrialsMixin:
    """Adds `--trials`."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the trials flag."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument("--trials", type=int, default=None, help="number of trials (100)")


class OutputMixin:
    """Adds `--output` and `--format` and writes the artifact."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the output flags."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument("--output", "-o", default=None, help="write the artifact here")
        parser.add_argument(
            "--format",
            choices=[fmt.value for fmt in OutputFormat],
            default=None,
            help="artifact format; without --output the artifact goes to stdout",
        )
        parser.add_argument(
            "--csv",
            nargs="?",
            const="-",
            default=None,
            metavar="PATH",
            help="write CSV, to PATH when given and to stdout otherwise",
        )

    def get_output(self, config: RunConfig) -> Path | None:
        """The artifact path; `--csv PATH` stands in for `--output`."""
        if config.output is not None:
            return config.output
        csv_path = config.option("csv")
        if csv_path is None or csv_path == "-":
            return None
        return Path(csv_path)

    def get_format(self, config: RunConfig) -> OutputFormat | None:
        """The requested format, guessing from the output suffix."""
        if config.format is not None:
            return config.format
        if config.option("csv") is not None:
            return OutputFormat.CSV
        output = self.get_output(config)
        if output is not None:
            return OutputFormat.JSON if output.suffix == ".json" else OutputFormat.CSV
        return None

    def emit(self, artifact: Artifact, config: RunConfig, stream: TextIO) -> None:
        """Write the artifact to a file or stdout; print the summary otherwise."""
        fmt = self.get_format(config)
        if fmt is None:
            stream.write(artifact.summary + "\n")
            return
        text = artifact.render(fmt)
        output = self.get_output(config)
        if output is None:
            stream.write(text)
            return
        try:
            output.write_text(text, encoding="utf-8")
        except OSError as exc:
            _err_msg = f"Cannot write {output}: {exc.strerror}."
            raise HomoclinicConfigurationError(_err_msg) from exc
        logger.info("wrote %s (%d rows)", output, len(artifact.rows))
        stream.write(artifact.summary + "\n")

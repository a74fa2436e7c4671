"""The `homoclinic` command-line program."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

from covers import __version__
from covers.commands import (
    AcceptanceCommand,
    ClassifyCommand,
    CocycleCheckCommand,
    DecodeCommand,
    DiskCommand,
    EncodeCommand,
    EntropyCommand,
    GenerateCommand,
    HomoclinicCommand,
    NoHomoclinicCommand,
    PeriodicCommand,
    RecoverCommand,
    ReduceCommand,
    RoundtripCommand,
    ShadowCommand,
    ShatterCommand,
    VLCommand,
    ZfEntropyCommand,
)
from covers.config import build_config, configure_logging
from covers.exceptions import HomoclinicConfigurationError, HomoclinicError

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Sequence
    from typing import TextIO

    from covers.commands import Command

__all__: list[str] = [
    "COMMANDS",
    "HomoclinicArgumentParser",
    "build_parser",
    "dispatch",
    "main",
]

logger = logging.getLogger(__name__)

PROG: str = "homoclinic"

COMMANDS: tuple[type[Command], ...] = (
    ClassifyCommand,
    EntropyCommand,
    PeriodicCommand,
    HomoclinicCommand,
    GenerateCommand,
    EncodeCommand,
    DecodeCommand,
    RoundtripCommand,
    ShadowCommand,
    ReduceCommand,
    RecoverCommand,
    CocycleCheckCommand,
    ZfEntropyCommand,
    VLCommand,
    NoHomoclinicCommand,
    DiskCommand,
    ShatterCommand,
    AcceptanceCommand,
)

_GLOBAL_KEYS = frozenset({"config", "verbose", "command", "subcommand", "handler"})


class HomoclinicArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as `HomoclinicConfigurationError` instead of exiting."""

    def error(self, message: str) -> NoReturn:
        """Print the usage line and raise."""
        self.print_usage(sys.stderr)
        _err_msg = f"{self.prog}: {message}"
        raise HomoclinicConfigurationError(_err_msg)


def build_parser() -> HomoclinicArgumentParser:
    """The top-level parser with one subparser per command."""
    parser = HomoclinicArgumentParser(
        prog=PROG,
        description="Homoclinic points, symbolic covers and pseudo-covers of α_f.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--config", type=Path, default=None, help="JSON file of settings; flags win on conflict"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    groups: dict[str, argparse._SubParsersAction[HomoclinicArgumentParser]] = {}

    for command_class in COMMANDS:
        command = command_class()
        target = subparsers
        if command.group is not None:
            if command.group not in groups:
                group_parser = subparsers.add_parser(
                    command.group, help=f"{command.group} subcommands"
                )
                groups[command.group] = group_parser.add_subparsers(
                    dest="subcommand", metavar="subcommand", required=True
                )
            target = groups[command.group]
        sub = target.add_parser(
            command.get_name(), help=command.help, description=command.get_description()
        )
        command.add_arguments(sub)
        sub.set_defaults(handler=command)
    return parser


def dispatch(argv: Sequence[str] | None = None, stream: TextIO | None = None) -> int:
    """Parse `argv`, run the command and return the exit code."""
    stream = sys.stdout if stream is None else stream
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except HomoclinicConfigurationError as exc:
        sys.stderr.write(f"{PROG}: error: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)

    configure_logging(namespace.verbose)
    handler: Command = namespace.handler
    flags = {key: value for key, value in vars(namespace).items() if key not in _GLOBAL_KEYS}
    try:
        config = build_config(flags, namespace.config)
        handler.run(config, stream)
    except HomoclinicError as exc:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"{PROG}: error: {exc}\n")
        return exc.exit_code
    return 0


def main() -> NoReturn:
    """Console-script entry point."""
    sys.exit(dispatch())

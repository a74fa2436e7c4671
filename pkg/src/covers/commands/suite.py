"""The `acceptance` command."""

from __future__ import annotations

from typing import TYPE_CHECKING

from covers.acceptance import run_acceptance
from covers.commands.base import Command, OutputMixin, SeedMixin, int_list
from covers.exceptions import AcceptanceError

if TYPE_CHECKING:  # pragma: no cover
    import argparse
    from typing import TextIO

    from covers.commands.base import Artifact
    from covers.config import RunConfig

__all__: list[str] = ["AcceptanceCommand"]


class AcceptanceCommand(SeedMixin, OutputMixin, Command):
    """Run the numbered acceptance criteria and report pass/fail."""

    name = "acceptance"
    help = "run the acceptance suite"
    result = "each numbered criterion checks one of the results above with a fixed seed."
    description = (
        "Run every acceptance criterion (or those given with --only) and "
        "write a table of number, name, passed, seconds and detail. "
        "Exits with status 3 when a criterion fails."
    )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--only` and `--quick`."""
        super().add_arguments(parser)
        parser.add_argument("--only", default=None, help="criteria to run, e.g. 1,3,4 or 1..6")
        parser.add_argument(
            "--quick", action="store_true", default=None, help="reduced sample sizes"
        )

    def handle(self, config: RunConfig) -> Artifact:
        """One row per criterion."""
        only = config.option("only")
        if isinstance(only, str):
            only = int_list(only)
        results = run_acceptance(only, config.seed, quick=bool(config.option("quick", False)))
        rows = [(r.number, r.name, r.passed, r.seconds, r.detail) for r in results]
        failed = [r.number for r in results if not r.passed]
        summary = f"{len(results) - len(failed)}/{len(results)} criteria passed"
        if failed:
            summary += f"; failed: {', '.join(map(str, failed))}"
        return self.artifact(
            ("number", "name", "passed", "seconds", "detail"), rows, summary, failed=failed
        )

    def run(self, config: RunConfig, stream: TextIO) -> Artifact:
        """Emit the report, then fail when any criterion failed."""
        artifact = super().run(config, stream)
        if artifact.meta["failed"]:
            _err_msg = f"acceptance criteria failed: {artifact.meta['failed']}"
            raise AcceptanceError(_err_msg)
        return artifact

"""Commands about the spectrum of f: classification, entropy, periodic points."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from covers.commands.base import (
    Command,
    OutputMixin,
    PolynomialMixin,
    ToleranceMixin,
)
from covers.exceptions import HomoclinicConfigurationError
from covers.spectra import periodic_count_matrix, periodic_growth

if TYPE_CHECKING:  # pragma: no cover
    import argparse

    from covers.commands.base import Artifact
    from covers.config import RunConfig

__all__: list[str] = [
    "ClassifyCommand",
    "EntropyCommand",
    "PeriodicCommand",
]

logger = logging.getLogger(__name__)


class ClassifyCommand(PolynomialMixin, ToleranceMixin, OutputMixin, Command):
    """Roots of f split by the unit circle, with the Pisot/Salem flags."""

    name = "classify"
    help = "classify f as hyperbolic or not, Pisot, Salem, cyclotomic"
    result = "α_f is expansive exactly when f has no roots on the unit circle."
    description = (
        "Find the roots of f, split them into inside, on and outside the unit "
        "circle, and report whether α_f is expansive (no roots on the circle)."
    )

    def handle(self, config: RunConfig) -> Artifact:
        """One row per root."""
        spectrum = self.get_spectrum(config)
        rows = [
            (i, theta.real, theta.imag, abs(theta), tag.value)
            for i, (theta, tag) in enumerate(zip(spectrum.roots, spectrum.tags))
        ]
        summary = f"{spectrum.flags.describe()}, entropy {spectrum.entropy_roots:.10f}"
        return self.artifact(
            ("index", "re", "im", "abs", "tag"),
            rows,
            summary,
            poly=str(spectrum.poly),
            expansive=spectrum.flags.expansive,
            pisot=spectrum.flags.pisot,
            salem=spectrum.flags.salem,
            cyclotomic=spectrum.flags.cyclotomic,
            entropy=spectrum.entropy_roots,
        )


class EntropyCommand(PolynomialMixin, ToleranceMixin, OutputMixin, Command):
    """h(α_f) from the roots and from the Mahler integral."""

    name = "entropy"
    help = "topological entropy of α_f, by roots and by the Mahler integral"
    result = "h(α_f) = log|f_m| + Σ_{|θ|>1} log|θ| = ∫₀¹ log|f(e^{2πit})| dt."
    description = (
        "h(α_f) = log|f_m| + Σ log|θ| over roots outside the unit circle, "
        "cross-checked against ∫ log|f(e^{2πit})| dt."
    )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--quad`."""
        super().add_arguments(parser)
        parser.add_argument(
            "--quad",
            dest="quad_points",
            type=int,
            default=None,
            help="subinterval limit for the quadrature (200)",
        )

    def handle(self, config: RunConfig) -> Artifact:
        """A single row with both values."""
        spectrum = self.get_spectrum(config)
        gap = abs(spectrum.entropy_roots - spectrum.entropy_integral)
        summary = f"entropy {spectrum.entropy_roots:.12f} (roots), {spectrum.entropy_integral:.12f} (integral)"
        return self.artifact(
            ("poly", "roots", "integral", "difference"),
            [(str(spectrum.poly), spectrum.entropy_roots, spectrum.entropy_integral, gap)],
            summary,
        )


class PeriodicCommand(PolynomialMixin, OutputMixin, Command):
    """|Fix(α_f^k)| for k = 1..K and its exponential growth rate."""

    name = "periodic"
    help = "periodic point counts |Res(f, u^k - 1)| against the entropy"
    result = "|Fix(α_f^k)| = |Res(f, u^k - 1)|, and (1/k) log |Fix(α_f^k)| tends to h(α_f)."
    description = (
        "Count the points of period k as the resultant of f and u^k - 1, and "
        "compare (1/k) log count with h(α_f). Unimodular f is cross-checked "
        "against |det(M^k - I)| for the companion matrix M."
    )
    k_max: int = 10

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--kmax`."""
        super().add_arguments(parser)
        parser.add_argument(
            "--kmax", dest="kmax", type=int, default=None, help="largest period (10)"
        )

    def get_k_max(self, config: RunConfig) -> int:
        """The largest period to count."""
        k_max = int(config.option("kmax", self.k_max))
        if k_max < 1:
            _err_msg = f"--kmax must be at least 1, got {k_max}."
            raise HomoclinicConfigurationError(_err_msg)
        return k_max

    def handle(self, config: RunConfig) -> Artifact:
        """Rows k, count, log_rate."""
        f = self.get_poly(config)
        report = periodic_growth(f, self.get_k_max(config))
        checked = abs(f.trailing) == 1 and abs(f.leading) == 1
        if checked:
            for row in report.rows:
                matrix_count = periodic_count_matrix(f, row.k)
                if matrix_count != row.count:
                    logger.warning(
                        "k=%d: resultant %d and determinant %d disagree",
                        row.k,
                        row.count,
                        matrix_count,
                    )
        rows = [(row.k, row.count, row.rate) for row in report.rows]
        last = report.rows[-1]
        summary = (
            f"(1/{last.k}) log P_{last.k} = {last.rate:.6f}, "
            f"entropy {report.entropy:.6f}, gap {abs(last.rate - report.entropy):.2e}"
        )
        return self.artifact(
            ("k", "count", "log_rate"), rows, summary, entropy=report.entropy, matrix_checked=checked
        )

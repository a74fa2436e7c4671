"""Commands for nonexpansive α_f: pseudo-covers, disk walks and shattering."""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from tokenize import TokenError
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from covers.commands.base import (
    Command,
    OutputMixin,
    PolynomialMixin,
    SeedMixin,
    ToleranceMixin,
    TrialsMixin,
    WindowMixin,
    int_list,
)
from covers.exceptions import HomoclinicConfigurationError
from covers.homoclinic import verify_no_homoclinic
from covers.laurent import one_norm, parse_poly
from covers.pseudocover import (
    DiskMethod,
    cocycle_d,
    disk_count,
    pajor_check,
    recover,
    shattered_sets,
    vl_experiment,
    xi_star_bar,
    zeta,
    zf_window_entropy,
)
from covers.spectra import compute_spectrum
from covers.symcover import CoverSeq, haar_point

if TYPE_CHECKING:  # pragma: no cover
    import argparse

    from covers.commands.base import Artifact
    from covers.config import RunConfig
    from covers.homoclinic import HomoclinicData

__all__: list[str] = [
    "CocycleCheckCommand",
    "DiskCommand",
    "NoHomoclinicCommand",
    "RecoverCommand",
    "ShatterCommand",
    "VLCommand",
    "ZfEntropyCommand",
    "parse_complex",
]

logger = logging.getLogger(__name__)


def parse_complex(text: str) -> complex:
    """Parse "0.6+0.8i", "i" or "exp(2*pi*i/5)" into a complex number."""
    transformations = (*standard_transformations, implicit_multiplication_application)
    try:
        text = re.sub(r"(\d)\s*([ij])\b", r"\1*\2", text)
        expr = parse_expr(
            text, local_dict={"i": sp.I, "j": sp.I}, transformations=transformations
        )
        return complex(sp.N(expr))
    except (SyntaxError, TokenError, TypeError, ValueError, sp.SympifyError) as exc:
        _err_msg = f"Cannot read a complex number from {text!r}."
        raise HomoclinicConfigurationError(_err_msg) from exc


class _OffsetMixin:
    """Adds `--offset`, the lower end c of the lift cube [c, c+1)."""

    offset: float = 0.0

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--offset`."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument("--offset", type=float, default=None, help="lift into [c, c+1) (0)")

    def get_offset(self, config: RunConfig) -> float:
        """The lift offset c."""
        return float(config.option("offset", self.offset))


class RecoverCommand(
    _OffsetMixin,
    PolynomialMixin,
    ToleranceMixin,
    WindowMixin,
    SeedMixin,
    TrialsMixin,
    OutputMixin,
    Command,
):
    """Pseudo-cover recovery of Haar points through (v, w) and ζ."""

    name = "recover"
    group = "pseudo"
    help = "recover points as ζ(v, w) = ρ(ξ̄*(v) + w)"
    result = (
        "every x in X_f equals ρ(ξ̄*(v) + w) for the symbols v of a lift of x and a central "
        "vector w."
    )
    description = (
        "For Haar-random x, take the symbols v of the lift of x, fit the "
        "central correction w, and check that ρ(ξ̄*(v) + w) gives x back."
    )

    def handle(self, config: RunConfig) -> Artifact:
        """Rows trial, error, residual, correction_ratio, xi_ratio, lo, hi."""
        f = self.get_poly(config)
        data = self.get_homoclinic(config)
        offset = self.get_offset(config)
        rows = []
        for trial, rng in enumerate(self.get_trial_rngs(config, config.trials)):
            x = haar_point(f, -config.window, config.window, rng)
            result = recover(data, x, offset=offset)
            lo, hi = result.report.window
            error = x.distance(zeta(data, result.point, (lo, hi)), lo, hi)
            report = result.report
            rows.append(
                (trial, error, report.residual, report.correction_ratio, report.xi_ratio, lo, hi)
            )
        worst = max(row[1] for row in rows)
        c_max = max(row[3] for row in rows)
        logger.info("empirical correction constant %.6g", c_max)
        summary = f"{config.trials} points: max error {worst:.3e}, max ‖w‖/‖y‖ {c_max:.4f}"
        return self.artifact(
            ("trial", "error", "residual", "correction_ratio", "xi_ratio", "lo", "hi"),
            rows,
            summary,
            max_error=worst,
            correction_constant=c_max,
        )


class CocycleCheckCommand(
    PolynomialMixin, ToleranceMixin, WindowMixin, SeedMixin, TrialsMixin, OutputMixin, Command
):
    """The cocycle equation and the definition of d on random data."""

    name = "cocycle-check"
    group = "pseudo"
    help = "check d(m, σ̄^n v) + σ̄^m d(n, v) = d(m+n, v)"
    result = (
        "d(m, σ̄^n v) + σ̄^m d(n, v) = d(m + n, v), with d in the span of the unit-circle "
        "roots."
    )
    description = (
        "Draw finitely supported v and shifts m, n; compare both sides of the "
        "cocycle equation, and d(n, v) with σ̄^n ξ̄*(v) - ξ̄*(σ̄^n v)."
    )
    support: int = 8
    max_shift: int = 6

    def _direct(self, data: HomoclinicData, n: int, v: CoverSeq) -> float:
        """max |σ̄^n ξ̄*(v) - ξ̄*(σ̄^n v) - d(n, v)| on [-4, 4]."""
        lo, hi = -4, 4
        moved = xi_star_bar(data, v, (lo + n, hi + n)).as_array()
        shifted = xi_star_bar(data, v.shift(n), (lo, hi)).as_array()
        expected = cocycle_d(data, n, v).realize(lo, hi).as_array()
        return float(np.abs(moved - shifted - expected).max())

    def handle(self, config: RunConfig) -> Artifact:
        """Rows trial, m, n, cocycle_error, direct_error."""
        f = self.get_poly(config)
        data = self.get_homoclinic(config)
        norm = one_norm(f)
        rows = []
        for trial, rng in enumerate(self.get_trial_rngs(config, config.trials)):
            values = rng.integers(-norm, norm + 1, size=2 * self.support + 1).tolist()
            v = CoverSeq.finite(values, -self.support, norm)
            m, n = (int(s) for s in rng.integers(-self.max_shift, self.max_shift + 1, size=2))
            left = cocycle_d(data, m, v.shift(n)) + cocycle_d(data, n, v).shift(m)
            right = cocycle_d(data, m + n, v)
            error = float(np.abs(left.coefficients - right.coefficients).max(initial=0.0))
            rows.append((trial, m, n, error, self._direct(data, n, v)))
        worst = max(row[3] for row in rows)
        direct = max(row[4] for row in rows)
        summary = f"{config.trials} trials: cocycle error {worst:.3e}, definition error {direct:.3e}"
        return self.artifact(
            ("trial", "m", "n", "cocycle_error", "direct_error"), rows, summary
        )


class ZfEntropyCommand(_OffsetMixin, PolynomialMixin, SeedMixin, OutputMixin, Command):
    """Window-counting entropy of the symbol space Z_f."""

    name = "zf-entropy"
    group = "pseudo"
    help = "estimate h(Z_f) from distinct length-N words of Haar samples"
    result = "the symbol space Z_f = f(σ̄)(Y_f) of lifts has the same entropy as α_f."
    description = (
        "Count distinct words v_0..v_{N-1} of f(σ̄)y over Haar-random x with "
        "lifts y, and report (1/N) log count at growing sample sizes."
    )
    length: int = 12
    samples: int = 10_000

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `-N` and `--samples`."""
        super().add_arguments(parser)
        parser.add_argument("-N", "--length", dest="length", type=int, default=None, help="word length (12)")
        parser.add_argument("--samples", type=int, default=None, help="sample count (10000)")

    def handle(self, config: RunConfig) -> Artifact:
        """Rows samples, distinct, estimate."""
        f = self.get_poly(config)
        report = zf_window_entropy(
            f,
            int(config.option("length", self.length)),
            int(config.option("samples", self.samples)),
            self.get_rng(config),
            offset=self.get_offset(config),
            spectrum=compute_spectrum(f, config.tol, config.quad_points),
        )
        rows = [(row.samples, row.distinct, row.estimate) for row in report.rows]
        summary = (
            f"h(Z_f) ≈ {report.estimate:.4f} (N = {report.length}), "
            f"conditional {report.conditional:.4f}, alphabet bound {report.alphabet_bound:.4f}"
        )
        return self.artifact(
            ("samples", "distinct", "estimate"),
            rows,
            summary,
            conditional=report.conditional,
            alphabet_bound=report.alphabet_bound,
        )


class VLCommand(PolynomialMixin, WindowMixin, SeedMixin, TrialsMixin, OutputMixin, Command):
    """Recovery with symbols moved into {0, ..., L-1}."""

    name = "vl"
    group = "pseudo"
    help = "pseudo-cover recovery over the alphabet {0..L-1}, L > 2‖f‖₁"
    result = "symbols over {0, ..., L-1} with L > 2‖f‖₁ still give a pseudo-cover of X_f."
    description = (
        "Shift the recovered symbols by the constant sequence ‖f‖₁ and "
        "report how many land in {0..L-1} and how many points are recovered."
    )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `-L`."""
        super().add_arguments(parser)
        parser.add_argument(
            "-L", "--alphabet-size", dest="alphabet_size", type=int, default=None,
            help="alphabet size L (2‖f‖₁ + 1)",
        )

    def handle(self, config: RunConfig) -> Artifact:
        """A single row with the counts."""
        f = self.get_poly(config)
        data = self.get_homoclinic(config)
        size = int(config.option("alphabet_size", 2 * one_norm(f) + 1))
        report = vl_experiment(
            data, size, config.trials, self.get_rng(config), window=config.window
        )
        row = (report.alphabet_size, report.trials, report.contained, report.recovered, report.max_error)
        summary = (
            f"L = {report.alphabet_size}: {report.contained}/{report.trials} in alphabet, "
            f"{report.recovered}/{report.trials} recovered, max error {report.max_error:.3e}"
        )
        return self.artifact(
            ("alphabet_size", "trials", "contained", "recovered", "max_error"), [row], summary
        )


class NoHomoclinicCommand(
    PolynomialMixin, WindowMixin, SeedMixin, TrialsMixin, OutputMixin, Command
):
    """Statistical check that nonexpansive α_f has no homoclinic points."""

    name = "no-homoclinic"
    group = "pseudo"
    help = "check that candidates h*(σ̄)w⁻ never decay on both sides"
    result = "a nonexpansive α_f has no nonzero homoclinic points."
    description = (
        "A nonexpansive α_f has no nonzero homoclinic points. Sample finitely "
        "supported h and check ρ(h*(σ̄)w⁻) keeps a tail above 0.01."
    )

    def handle(self, config: RunConfig) -> Artifact:
        """A single row with the sample counts."""
        data = self.get_homoclinic(config)
        report = verify_no_homoclinic(
            data, config.trials, config.window, rng=self.get_rng(config)
        )
        row = (report.trials, report.nondecaying, report.min_tail, report.max_tail, report.verdict)
        summary = (
            f"{report.nondecaying}/{report.trials} candidates fail to decay "
            f"(smallest tail {report.min_tail:.3f})"
        )
        return self.artifact(
            ("trials", "nondecaying", "min_tail", "max_tail", "verdict"), [row], summary
        )


class DiskCommand(OutputMixin, Command):
    """Words whose partial sums Σ a_k θ^k stay in a disk."""

    name = "disk"
    help = "count words with partial sums |Σ a_k θ^k| <= c"
    result = (
        "for |θ| = 1 the words with partial sums Σ a_k θ^k in a disk form a shift space "
        "whose entropy is the growth rate of these counts."
    )
    description = (
        "A random walk with steps a_k θ^k restricted to the disk of radius c. "
        "θ is given directly or as the first unit-circle root of a polynomial."
    )
    alphabet: str = "-1,1"
    length: int = 12
    radius: float = 2.0

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the walk parameters."""
        super().add_arguments(parser)
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--theta", default=None, help="θ, e.g. 'i' or '0.6+0.8i'")
        group.add_argument("--theta-poly", default=None, help="take θ from this polynomial")
        parser.add_argument("-c", "--radius", type=float, default=None, help="disk radius (2)")
        parser.add_argument("-N", "--length", dest="length", type=int, default=None, help="word length (12)")
        parser.add_argument("--alphabet", default=None, help="symbols, '-1,1' or '-2..2'")
        parser.add_argument(
            "--method", choices=[m.value for m in DiskMethod], default=None, help="enumerate or grid"
        )
        parser.add_argument("--resolution", type=int, default=None, help="grid cells per diameter (64)")

    def get_theta(self, config: RunConfig) -> complex:
        """θ from `--theta` or `--theta-poly`."""
        if config.option("theta"):
            return parse_complex(str(config.option("theta")))
        text = config.option("theta_poly")
        if not text:
            _class = self.__class__.__name__
            _err_msg = f"{_class} needs --theta or --theta-poly."
            raise HomoclinicConfigurationError(_err_msg)
        spectrum = compute_spectrum(parse_poly(str(text)), config.tol)
        if not spectrum.circle:
            _err_msg = f"{spectrum.poly} has no roots on the unit circle."
            raise HomoclinicConfigurationError(_err_msg)
        return max(spectrum.circle, key=lambda z: z.imag)

    def handle(self, config: RunConfig) -> Artifact:
        """Rows N, count, entropy for every length up to N."""
        theta = self.get_theta(config)
        radius = float(config.option("radius", self.radius))
        alphabet = int_list(str(config.option("alphabet", self.alphabet)))
        method = DiskMethod(config.option("method", DiskMethod.ENUMERATE.value))
        resolution = int(config.option("resolution", 64))
        rows = []
        for n in range(1, int(config.option("length", self.length)) + 1):
            result = disk_count(theta, radius, alphabet, n, method=method, resolution=resolution)
            rows.append((n, result.count, result.entropy))
        n, count, entropy = rows[-1]
        summary = f"θ = {theta:.6f}, c = {radius}: {count} words of length {n}, (1/N) log count = {entropy:.4f}"
        return self.artifact(("N", "count", "entropy"), rows, summary, theta=theta, method=method)


class ShatterCommand(SeedMixin, OutputMixin, Command):
    """Shattered sets of a family, with Pajor's and the Sauer–Shelah counts."""

    name = "shatter"
    help = "sets shattered by a family of subsets"
    result = (
        "Pajor: F shatters at least |F| sets. Sauer–Shelah: |F| <= Σ_{i<=d} C(n, i) for VC "
        "dimension d."
    )
    description = (
        "List the subsets T with {F ∩ T} = 2^T and check |sh(F)| >= |F| and "
        "|F| <= Σ_{i<=d} C(n, i) for the VC dimension d."
    )
    ground_size: int = 10

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--family` or `--random`."""
        super().add_arguments(parser)
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--family", default=None, help="JSON file holding a list of lists")
        group.add_argument("--random", type=int, default=None, help="draw this many random subsets")
        parser.add_argument("--ground-size", type=int, default=None, help="size of S for --random (10)")

    def get_family(self, config: RunConfig) -> tuple[list[list[Any]], list[Any]]:
        """The family and its ground set."""
        source = config.option("family")
        if source is not None:
            if isinstance(source, list):
                return source, []
            path = Path(source)
            try:
                family = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                _err_msg = f"Cannot read a family from {path}: {exc}."
                raise HomoclinicConfigurationError(_err_msg) from exc
            if not isinstance(family, list) or not all(isinstance(m, list) for m in family):
                _err_msg = f"{path} must hold a JSON list of lists."
                raise HomoclinicConfigurationError(_err_msg)
            return family, []
        count = config.option("random")
        if count is None:
            _err_msg = "shatter needs --family or --random."
            raise HomoclinicConfigurationError(_err_msg)
        size = int(config.option("ground_size", self.ground_size))
        rng = self.get_rng(config)
        family = [np.flatnonzero(rng.random(size) < 0.5).tolist() for _ in range(int(count))]
        return family, list(range(size))

    def handle(self, config: RunConfig) -> Artifact:
        """One row per shattered set."""
        family, ground = self.get_family(config)
        report = pajor_check(family, ground)
        shattered = shattered_sets(family, ground)
        rows = sorted(
            ((len(s), " ".join(sorted(map(str, s)))) for s in shattered),
        )
        summary = (
            f"|F| = {report.family_size}, |sh(F)| = {report.shattered_count}, "
            f"VC dimension {report.vc_dimension}; "
            f"Pajor {'holds' if report.pajor_holds else 'FAILS'}, "
            f"Sauer–Shelah {'holds' if report.sauer_shelah_holds else 'FAILS'}"
        )
        return self.artifact(
            ("size", "set"),
            rows,
            summary,
            family_size=report.family_size,
            shattered_count=report.shattered_count,
            vc_dimension=report.vc_dimension,
        )

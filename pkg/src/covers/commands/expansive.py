"""Commands for homoclinic points and the symbolic cover of expansive α_f."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from covers.commands.base import (
    Command,
    OutputMixin,
    PolynomialMixin,
    SeedMixin,
    ToleranceMixin,
    TrialsMixin,
    WindowMixin,
    float_list,
    int_list,
)
from covers.exceptions import HomoclinicConfigurationError
from covers.homoclinic import (
    Which,
    decays_two_sided,
    exact_one_sided,
    generate_homoclinic,
)
from covers.laurent import one_norm, parse_poly
from covers.symcover import (
    TRUNCATION_TOL,
    CoverSeq,
    XfPoint,
    beta_encode,
    block_point,
    check_alphabet_entropy,
    decode,
    haar_point,
    interior_window,
    kappa_lift,
    specification_gap,
    specification_shadow,
    wstar_reduce,
    xi,
)

if TYPE_CHECKING:  # pragma: no cover
    import argparse

    from covers.commands.base import Artifact
    from covers.config import RunConfig
    from covers.laurent import LaurentPoly

__all__: list[str] = [
    "DecodeCommand",
    "EncodeCommand",
    "GenerateCommand",
    "HomoclinicCommand",
    "ReduceCommand",
    "RoundtripCommand",
    "ShadowCommand",
]

logger = logging.getLogger(__name__)


def _joined(values: Any) -> str:
    return ",".join(str(v) for v in values)


class HomoclinicCommand(PolynomialMixin, ToleranceMixin, WindowMixin, OutputMixin, Command):
    """w⁺, w⁻ and w∘ on a window, or the exact one-sided sequence."""

    name = "homoclinic"
    help = "the homoclinic sequences w⁺, w⁻, w∘ of f"
    result = "f(σ̄)w⁺ = f(σ̄)w⁻ = δ_0, and w∘ = w⁻ - w⁺ lies in the kernel of f(σ̄)."
    description = (
        "Evaluate w⁺ and w⁻ with f(σ̄)w = δ_0 from the partial fractions of 1/f, "
        "and w∘ = w⁻ - w⁺. With --exact, solve the recursion in rationals for "
        "the side that has a zero tail."
    )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--exact`."""
        super().add_arguments(parser)
        parser.add_argument(
            "--exact",
            action="store_true",
            default=None,
            help="exact rationals for n = 0..window (one-sided f only)",
        )

    def handle(self, config: RunConfig) -> Artifact:
        """Rows n, w_plus, w_minus, w_circ or n, w_minus/w_plus exactly."""
        f = self.get_poly(config)
        spectrum = self.get_spectrum(config)
        if config.option("exact", False):
            exact = exact_one_sided(f, config.window, spectrum, tol=config.tol)
            seq = exact.values
            column = f"w_{exact.side.value}"
            rows = [(int(n), seq.at(int(n))) for n in seq.indices()]
            nonzero = [v for _, v in rows if v]
            summary = f"{column}: {', '.join(str(v) for v in nonzero[:6])}"
            return self.artifact(("n", column), rows, summary, side=exact.side)

        data = self.get_homoclinic(config, spectrum)
        idx = np.arange(-config.window, config.window + 1)
        plus = data.evaluate(Which.PLUS, idx)
        minus = data.evaluate(Which.MINUS, idx)
        circ = data.evaluate(Which.CIRCLE, idx)
        rows = list(zip(idx.tolist(), plus.tolist(), minus.tolist(), circ.tolist()))
        first = data.evaluate(Which.MINUS, np.arange(f.low, f.low + f.span + 2))
        summary = f"w⁻ from n = {f.low}: " + ", ".join(f"{v:.10g}" for v in first.tolist())
        return self.artifact(("n", "w_plus", "w_minus", "w_circ"), rows, summary)


class GenerateCommand(PolynomialMixin, ToleranceMixin, WindowMixin, OutputMixin, Command):
    """Homoclinic points ρ(h*(σ̄)w^Δ) from a finitely supported h."""

    name = "generate"
    help = "the homoclinic point h*(σ̄)x^Δ of an expansive α_f"
    result = (
        "the homoclinic points of an expansive α_f are the integer combinations of shifts of "
        "x^Δ = ρ(w^Δ)."
    )
    description = (
        "Every homoclinic point of an expansive α_f is ρ(h*(σ̄)w^Δ) for some "
        "integer Laurent polynomial h. Prints the point and whether it decays."
    )
    h: str = "1"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--h`."""
        super().add_arguments(parser)
        parser.add_argument("--h", dest="h_poly", default=None, help="the polynomial h (1)")

    def handle(self, config: RunConfig) -> Artifact:
        """Rows n, x_n."""
        data = self.get_homoclinic(config)
        h = parse_poly(str(config.option("h_poly", self.h)))
        point = generate_homoclinic(data, h)
        decays = decays_two_sided(point)
        rows = list(zip(point.indices().tolist(), point.as_array().tolist()))
        summary = f"h = {h}: decays on both sides: {'yes' if decays else 'no'}"
        return self.artifact(("n", "x"), rows, summary, h=str(h), decays=decays)


class _PointMixin:
    """Reads `--point`, the coordinates x_0..x_{m-1} of a point of X_f."""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--point`."""
        super().add_arguments(parser)  # type: ignore[misc]
        parser.add_argument("--point", default=None, help="coordinates x_0,...,x_{m-1} in [0, 1)")

    def get_point(self, config: RunConfig, f: LaurentPoly) -> XfPoint:
        """The point on [-window, window]."""
        text = config.option("point")
        if not text:
            _err_msg = "--point is required, e.g. --point 0.25,0.6"
            raise HomoclinicConfigurationError(_err_msg)
        coords = float_list(text) if isinstance(text, str) else [float(c) for c in text]
        return XfPoint.from_torus(f, coords, -config.window, config.window)


class EncodeCommand(_PointMixin, PolynomialMixin, ToleranceMixin, WindowMixin, OutputMixin, Command):
    """Symbols v with ξ(v) = x."""

    name = "encode"
    help = "symbols of a point: v = f(σ̄)y for the lift y of x into [0,1)^ℤ"
    result = (
        "f(σ̄) maps the lift of a point of X_f into [0, 1)^ℤ onto a word with symbols "
        "bounded by ‖f‖₁."
    )
    description = (
        "Encode a point of X_f as a sequence over {-‖f‖₁..‖f‖₁}. With --kappa, "
        "lift into [-1/2κ, 1 - 1/2κ) for κ = |f(1)| so fixed points get constant "
        "words. With --beta and a Pisot f, use greedy β-expansion digits instead."
    )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--beta` and `--kappa`."""
        super().add_arguments(parser)
        lift = parser.add_mutually_exclusive_group()
        lift.add_argument(
            "--beta", action="store_true", default=None, help="greedy β-expansion digits"
        )
        lift.add_argument(
            "--kappa", action="store_true", default=None, help="lift into [-1/2κ, 1 - 1/2κ)"
        )

    def handle(self, config: RunConfig) -> Artifact:
        """Rows n, symbol."""
        f = self.get_poly(config)
        spectrum = self.get_spectrum(config)
        x = self.get_point(config, f)
        if config.option("beta", False):
            cover = beta_encode(self.get_homoclinic(config, spectrum), x)
        elif config.option("kappa", False):
            cover = kappa_lift(self.get_homoclinic(config, spectrum), x)
        else:
            cover = decode(f, x, spectrum=spectrum)
        rows = list(zip(cover.v.indices().tolist(), cover.values.tolist()))
        summary = f"symbols on [{cover.v.lo}, {cover.v.hi}]: {_joined(cover.values.tolist())}"
        return self.artifact(("n", "symbol"), rows, summary, alphabet_bound=cover.alphabet_bound)


class DecodeCommand(PolynomialMixin, ToleranceMixin, WindowMixin, OutputMixin, Command):
    """The point ξ(v) of a finitely supported symbol sequence."""

    name = "decode"
    help = "the point ξ(v) = ρ(Σ v_n w^Δ_{k-n}) of finitely many symbols"
    result = (
        "ξ(v) = ρ(Σ v_n σ̄^{-n} w^Δ) maps bounded integer words onto X_f and commutes "
        "with the shift."
    )
    description = "Decode symbols v_lo..v_hi (zero elsewhere) to a point of X_f."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--symbols` and `--lo`."""
        super().add_arguments(parser)
        parser.add_argument("--symbols", default=None, help="symbols, e.g. 1,0,-1")
        parser.add_argument("--lo", type=int, default=None, help="index of the first symbol (0)")

    def handle(self, config: RunConfig) -> Artifact:
        """Rows n, x_n on [lo - window, hi + window]."""
        data = self.get_homoclinic(config)
        text = config.option("symbols")
        if not text:
            _err_msg = "--symbols is required, e.g. --symbols 1,0,-1"
            raise HomoclinicConfigurationError(_err_msg)
        lo = int(config.option("lo", 0))
        cover = CoverSeq.finite(int_list(str(text)), lo)
        point = xi(data, cover, (lo - config.window, cover.v.hi + config.window), tol=config.tol)
        rows = list(zip(point.coords.indices().tolist(), point.coords.as_array().tolist()))
        head = point.coords.take(np.arange(0, data.poly.span)).tolist()
        summary = "x_0..x_{m-1} = " + ", ".join(f"{v:.12f}" for v in head)
        return self.artifact(("n", "x"), rows, summary)


class RoundtripCommand(
    PolynomialMixin, ToleranceMixin, WindowMixin, SeedMixin, TrialsMixin, OutputMixin, Command
):
    """ξ(decode(x)) = x on Haar-random points."""

    name = "roundtrip"
    help = "check ξ(decode(x)) = x on random points"
    result = "ξ(f(σ̄)y) = ρ(y) for every bounded lift y of a point of X_f."
    description = (
        "Draw Haar-random points of X_f, encode them, decode the symbols again "
        "and report the largest torus distance on the certified interior."
    )

    def handle(self, config: RunConfig) -> Artifact:
        """Rows trial, error, lo, hi, sup."""
        f = self.get_poly(config)
        spectrum = self.get_spectrum(config)
        data = self.get_homoclinic(config, spectrum)
        norm = one_norm(f)
        rows = []
        for trial, rng in enumerate(self.get_trial_rngs(config, config.trials)):
            x = haar_point(f, -config.window, config.window, rng)
            cover = decode(f, x, spectrum=spectrum)
            lo, hi = interior_window(
                data, cover.v, TRUNCATION_TOL, sup=float(cover.alphabet_bound)
            )
            y = xi(data, cover, (lo, hi))
            rows.append((trial, x.distance(y, lo, hi), lo, hi, int(cover.v.sup_norm())))
        worst = max(row[1] for row in rows)
        widest = max(row[4] for row in rows)
        summary = f"{config.trials} trials: max error {worst:.3e}, max |v| {widest} <= ‖f‖₁ = {norm}"
        return self.artifact(
            ("trial", "error", "lo", "hi", "sup"), rows, summary, max_error=worst, one_norm=norm
        )


class ShadowCommand(PolynomialMixin, ToleranceMixin, OutputMixin, Command):
    """One point shadowing several orbit blocks."""

    name = "shadow"
    help = "specification: shadow orbit blocks separated by N(ε)"
    result = (
        "an expansive α_f has specification: orbit blocks separated by N(ε) are ε-shadowed "
        "by one point, which can be taken periodic."
    )
    description = (
        "Read blocks [{lo, hi, point: [x_0, ..., x_{m-1}]}, ...] from a JSON file "
        "and build a single point within ε of each block, optionally periodic."
    )
    eps: float = 1e-3

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add `--blocks`, `--eps` and `--period`."""
        super().add_arguments(parser)
        parser.add_argument("--blocks", default=None, help="JSON file of blocks")
        parser.add_argument("--eps", type=float, default=None, help="shadowing accuracy (1e-3)")
        parser.add_argument("--period", type=int, default=None, help="make the point periodic")

    def get_blocks(self, config: RunConfig) -> list[dict[str, Any]]:
        """The block list from the file named by `--blocks`."""
        source = config.option("blocks")
        if source is None:
            _err_msg = "--blocks is required."
            raise HomoclinicConfigurationError(_err_msg)
        if isinstance(source, list):
            return source
        path = Path(source)
        try:
            blocks = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            _err_msg = f"Cannot read blocks from {path}: {exc}."
            raise HomoclinicConfigurationError(_err_msg) from exc
        if not isinstance(blocks, list) or not all(
            isinstance(b, dict) and {"lo", "hi", "point"} <= b.keys() for b in blocks
        ):
            _err_msg = f"{path} must hold a list of {{lo, hi, point}} objects."
            raise HomoclinicConfigurationError(_err_msg)
        return blocks

    def handle(self, config: RunConfig) -> Artifact:
        """Rows block, lo, hi, error."""
        f = self.get_poly(config)
        data = self.get_homoclinic(config)
        eps = float(config.option("eps", self.eps))
        _, margin = specification_gap(data, eps)
        blocks = []
        for block in self.get_blocks(config):
            a, b = int(block["lo"]), int(block["hi"])
            coords = [float(c) for c in block["point"]]
            blocks.append(((a, b), block_point(f, coords, a, b, margin)))
        period = config.option("period")
        result = specification_shadow(
            data, blocks, eps, period=None if period is None else int(period)
        )
        rows = [(i, a, b, err) for i, (((a, b), _), err) in enumerate(zip(blocks, result.errors))]
        summary = f"N(ε) = {result.gap}, margin {result.margin}, max error {max(result.errors):.3e}"
        if result.periodicity_error is not None:
            summary += f", periodicity error {result.periodicity_error:.3e}"
        return self.artifact(
            ("block", "lo", "hi", "error"),
            rows,
            summary,
            gap=result.gap,
            margin=result.margin,
            period=result.period,
            periodicity_error=result.periodicity_error,
        )


class ReduceCommand(PolynomialMixin, OutputMixin, Command):
    """Lexicographically least representative of v + f(σ̄)h."""

    name = "reduce"
    help = "reduce a symbol word modulo f(σ̄)h within the alphabet"
    result = (
        "each word is equivalent modulo f(σ̄)h to a lexicographically least word in the same "
        "alphabet."
    )
    description = (
        "Search small finitely supported h for the lexicographically least "
        "word v - f(σ̄)h whose symbols stay in {-A..A}."
    )
    support: int = 8
    coeff: int = 2
    budget: int = 200_000

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add the search bounds."""
        super().add_arguments(parser)
        parser.add_argument("--symbols", default=None, help="symbols, e.g. 1,0,-1")
        parser.add_argument("--lo", type=int, default=None, help="index of the first symbol (0)")
        parser.add_argument("--support", type=int, default=None, help="max nonzero terms of h (8)")
        parser.add_argument("--coeff", type=int, default=None, help="max |h_j| (2)")
        parser.add_argument("--alphabet", type=int, default=None, help="symbol bound A (‖f‖₁)")
        parser.add_argument("--budget", type=int, default=None, help="search node budget")

    def handle(self, config: RunConfig) -> Artifact:
        """Rows n, before, after."""
        f = self.get_poly(config)
        text = config.option("symbols")
        if not text:
            _err_msg = "--symbols is required, e.g. --symbols 1,0,-1"
            raise HomoclinicConfigurationError(_err_msg)
        symbols = int_list(str(text))
        alphabet = config.option("alphabet")
        if alphabet is not None:
            check_alphabet_entropy(f, self.get_spectrum(config), int(alphabet))
        bound = int(alphabet) if alphabet is not None else max(one_norm(f), *map(abs, symbols))
        cover = CoverSeq.finite(symbols, int(config.option("lo", 0)), bound)
        reduction = wstar_reduce(
            f,
            cover,
            int(config.option("support", self.support)),
            int(config.option("coeff", self.coeff)),
            node_budget=int(config.option("budget", self.budget)),
        )
        after = reduction.cover.values.tolist()
        rows = list(zip(cover.v.indices().tolist(), symbols, after))
        h = " ".join(f"{c:+d}@{n}" for n, c in sorted(reduction.h.items())) or "0"
        summary = f"reduced: {_joined(after)} (h: {h})"
        if reduction.exhausted:
            summary += " [budget exhausted]"
        return self.artifact(
            ("n", "before", "after"), rows, summary, h=reduction.h, exhausted=reduction.exhausted
        )

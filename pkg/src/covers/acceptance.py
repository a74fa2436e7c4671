"""Acceptance suite: numbered end-to-end checks with pass/fail details.

Each criterion is a function registered with `@criterion`. It receives a
seeded generator and the `quick` flag (smaller sample sizes) and returns
whether it passed plus a one-line detail.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from covers.exceptions import HomoclinicConfigurationError, HomoclinicError
from covers.homoclinic import Which, build_homoclinic, exact_one_sided, verify_no_homoclinic
from covers.laurent import (
    LaurentPoly,
    SeqKind,
    SeqWindow,
    apply_poly_shift,
    one_norm,
    parse_poly,
)
from covers.pseudocover import (
    central_correction,
    cocycle_d,
    lift_Yf,
    pajor_check,
    recover,
    sauer_shelah_bound,
    shattered_sets,
    xi_star_bar,
    zeta,
    zf_window_entropy,
)
from covers.spectra import compute_spectrum, periodic_count_matrix, periodic_growth
from covers.symcover import (
    CoverSeq,
    XfPoint,
    beta_encode,
    beta_injectivity,
    block_point,
    decode,
    fixed_point_windows,
    haar_point,
    interior_window,
    is_golden_mean_admissible,
    kappa_lift,
    specification_gap,
    specification_shadow,
    xi,
)

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Callable, Iterable

    from covers.homoclinic import HomoclinicData

    CheckFn = Callable[[np.random.Generator, bool], tuple[bool, str]]

__all__: list[str] = [
    "CRITERIA",
    "CriterionResult",
    "criterion",
    "run_acceptance",
]

logger = logging.getLogger(__name__)

Check = tuple[bool, str]

CAT_MAP = "u^2-3u+1"
GOLDEN = "u^2-u-1"
SALEM = "u^4-u^3-u^2-u+1"
CIRCLE_ONLY = "5u^2-6u+5"

ZF_SAMPLES = 100_000
ZF_ENTROPY_TOL = 0.15


@dataclass(frozen=True)
class CriterionResult:
    """The outcome of one acceptance criterion."""

    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class _Criterion:
    number: int
    name: str
    check: CheckFn


CRITERIA: dict[int, _Criterion] = {}


def criterion(number: int, name: str) -> Callable[[CheckFn], CheckFn]:
    """Register an acceptance check under its number."""

    def register(check: CheckFn) -> CheckFn:
        CRITERIA[number] = _Criterion(number, name, check)
        return check

    return register


def _trials(quick: bool, full: int, reduced: int) -> int:  # noqa: FBT001
    return reduced if quick else full


@criterion(1, "exact homoclinic vectors")
def _exact_vectors(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    expected = {
        CIRCLE_ONLY: [Fraction(1, 5), Fraction(6, 25), Fraction(11, 125), Fraction(-84, 625)],
        "2u^2-u+2": [Fraction(1, 2), Fraction(1, 4), Fraction(-3, 8), Fraction(-7, 16)],
    }
    for text, values in expected.items():
        f = parse_poly(text)
        seq = exact_one_sided(f, f.span + len(values)).values
        got = seq.take(np.arange(f.span, f.span + len(values)))
        if got != values:
            return False, f"{text}: got {', '.join(map(str, got))}"
    return True, "5u^2-6u+5 and 2u^2-u+2 match exactly"


@criterion(2, "delta identity")
def _delta_identity(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    worst = 0.0
    polys = (CAT_MAP, GOLDEN, "u^3-3u^2+1", CIRCLE_ONLY, "2u^2-u+2", SALEM)
    for text in polys:
        f = parse_poly(text)
        data = build_homoclinic(f, window=48)
        for which in (Which.PLUS, Which.MINUS):
            image = apply_poly_shift(f, data.sequence(which, -40, 40))
            delta = (image.indices() == 0).astype(float)
            worst = max(worst, float(np.abs(image.as_array() - delta).max()))
        idx = np.arange(-40, 41)
        split = data.evaluate(Which.PLUS, idx) + data.evaluate(Which.CIRCLE, idx)
        worst = max(worst, float(np.abs(split - data.evaluate(Which.MINUS, idx)).max()))
    return worst < 1e-8, f"{len(polys)} polynomials, max error {worst:.2e}"


@criterion(3, "entropy cross-check")
def _entropy(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    closed = {"2-u": math.log(2), "3-2u": math.log(3), CIRCLE_ONLY: math.log(5)}
    for text, value in closed.items():
        got = compute_spectrum(parse_poly(text)).entropy_roots
        if abs(got - value) > 1e-9:
            return False, f"entropy({text}) = {got!r}, expected {value!r}"
    worst = 0.0
    for text in (CAT_MAP, GOLDEN, "u^3-u-1", CIRCLE_ONLY, SALEM, "2u^2-u+2"):
        spectrum = compute_spectrum(parse_poly(text))
        gap = abs(spectrum.entropy_roots - spectrum.entropy_integral)
        if gap >= (1e-6 if spectrum.expansive else 1e-4):
            return False, f"{text}: roots and integral differ by {gap:.2e}"
        worst = max(worst, gap)
    return True, f"closed forms exact, max roots/integral gap {worst:.2e}"


@criterion(4, "periodic growth")
def _periodic(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    f = parse_poly(GOLDEN)
    report = periodic_growth(f, 30)
    counts = [row.count for row in report.rows]
    if counts[:4] != [1, 1, 4, 5]:
        return False, f"P_1..P_4 = {counts[:4]}"
    for row in report.rows:
        if periodic_count_matrix(f, row.k) != row.count:
            return False, f"determinant disagrees at k = {row.k}"
    gap = abs(report.rows[-1].rate - math.log((1 + math.sqrt(5)) / 2))
    return gap < 0.02, f"|(1/30) log P_30 - log φ| = {gap:.4f}"


def _hyperbolic_cubic(rng: np.random.Generator) -> LaurentPoly:
    """A random unimodular cubic with roots well away from the circle."""
    while True:
        a, b = (int(c) for c in rng.integers(-4, 5, size=2))
        f = LaurentPoly((int(rng.choice([-1, 1])), b, a, 1))
        try:
            spectrum = compute_spectrum(f)
        except HomoclinicError:
            continue
        slow = max(abs(r) if abs(r) < 1 else 1 / abs(r) for r in spectrum.roots)
        if spectrum.expansive and slow < 0.6:
            return f


def _roundtrip_error(
    data: HomoclinicData, rng: np.random.Generator, window: int, *, kappa: bool = False
) -> tuple[float, int]:
    f = data.poly
    x = haar_point(f, -window, window, rng)
    cover = kappa_lift(data, x) if kappa else decode(f, x, spectrum=data.spectrum)
    lo, hi = interior_window(data, cover.v, sup=float(cover.alphabet_bound))
    return x.distance(xi(data, cover, (lo, hi)), lo, hi), int(cover.v.sup_norm())


def _fixed_points_separated(data: HomoclinicData) -> bool:
    windows = fixed_point_windows(data.poly)
    codes = set()
    for t in windows.fixed_points:
        if len(windows.preimages(float(t))) != 1:
            return False
        x = XfPoint(SeqWindow(-8, [float(t)] * 17, SeqKind.TORUS))
        values = set(kappa_lift(data, x).values.tolist())
        if len(values) != 1:
            return False
        codes |= values
    return len(codes) == windows.kappa


@criterion(5, "expansive round-trip")
def _roundtrip(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    trials = _trials(quick, 1000, 100)
    worst = 0.0
    polys = [parse_poly(CAT_MAP), _hyperbolic_cubic(rng)]
    for f in polys:
        data = build_homoclinic(f, window=64)
        for _ in range(trials):
            error, sup = _roundtrip_error(data, rng, 64)
            if sup > one_norm(f):
                return False, f"{f}: symbol {sup} exceeds ‖f‖₁ = {one_norm(f)}"
            worst = max(worst, error)
        for _ in range(trials // 10):
            worst = max(worst, _roundtrip_error(data, rng, 64, kappa=True)[0])
        if not _fixed_points_separated(data):
            return False, f"{f}: fixed points share a κ-lift code"
    return worst < 1e-8, (
        f"{trials} points each on {polys[0]} and {polys[1]} (and a tenth via the κ-lift), "
        f"max error {worst:.2e}"
    )


@criterion(6, "golden-mean cover")
def _golden(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    f = parse_poly("-1,-1,1")
    data = build_homoclinic(f, window=64)
    worst = 0.0
    for _ in range(_trials(quick, 1000, 100)):
        x = haar_point(f, -64, 64, rng)
        cover = beta_encode(data, x)
        if not is_golden_mean_admissible(cover.values.tolist()):
            return False, "a digit word contains 11"
        lo, hi = interior_window(data, cover.v, 1e-9, sup=1.0)
        worst = max(worst, x.distance(xi(data, cover, (lo, hi)), lo, hi))
    report = beta_injectivity(data, rng, _trials(quick, 200, 40))
    detail = (
        f"all words admissible, max error {worst:.2e}, "
        f"{report.collisions}/{report.samples} points with a second code"
    )
    return worst < 1e-6 and report.collisions == 0, detail


@criterion(7, "specification")
def _specification(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    f = parse_poly(CAT_MAP)
    data = build_homoclinic(f, window=64)
    eps = 1e-3
    gap, margin = specification_gap(data, eps)
    spans = [(0, 5), (5 + gap, 10 + gap)]
    blocks = [(span, block_point(f, rng.random(2).tolist(), *span, margin)) for span in spans]
    plain = specification_shadow(data, blocks, eps)
    period = gap + spans[-1][1] + f.span
    periodic = specification_shadow(data, blocks, eps, period=period)
    error = periodic.periodicity_error or 0.0
    detail = (
        f"N(ε) = {gap}, errors {max(plain.errors):.2e} / {max(periodic.errors):.2e}, "
        f"periodicity {error:.2e}"
    )
    return error < 1e-8, detail


def _random_cover(rng: np.random.Generator, f: LaurentPoly, half: int = 8) -> CoverSeq:
    norm = one_norm(f)
    values = rng.integers(-norm, norm + 1, size=2 * half + 1).tolist()
    return CoverSeq.finite(values, -half, norm)


@criterion(8, "nonexpansive identities")
def _nonexpansive(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    trials = _trials(quick, 1000, 100)
    inverse = cocycle = residual = 0.0
    ratios: list[float] = []
    for text in (CIRCLE_ONLY, SALEM):
        f = parse_poly(text)
        data = build_homoclinic(f, window=64)
        for _ in range(trials):
            v = _random_cover(rng, f)
            image = apply_poly_shift(f, xi_star_bar(data, v, (v.v.lo - 8, v.v.hi + 8)))
            target = np.asarray(v.v.take(image.indices()), dtype=float)
            inverse = max(inverse, float(np.abs(image.as_array() - target).max()))

            m, n = (int(s) for s in rng.integers(-6, 7, size=2))
            left = cocycle_d(data, m, v.shift(n)) + cocycle_d(data, n, v).shift(m)
            diff = left.coefficients - cocycle_d(data, m + n, v).coefficients
            cocycle = max(cocycle, float(np.abs(diff).max(initial=0.0)))

            report = central_correction(data, lift_Yf(haar_point(f, -48, 48, rng)))
            lo, hi = report.window
            kernel = apply_poly_shift(f, report.correction.realize(lo, hi))
            residual = max(residual, report.residual, kernel.sup_norm())
            ratios.append(report.correction_ratio)
    c = max(ratios)
    logger.info("empirical correction constant %.6g", c)
    passed = inverse < 1e-8 and cocycle < 1e-10 and residual < 1e-7 and math.isfinite(c)
    detail = (
        f"f(σ̄)ξ̄* error {inverse:.2e}, cocycle {cocycle:.2e}, "
        f"correction residual {residual:.2e}, empirical c {c:.3f}"
    )
    return passed, detail


@criterion(9, "pseudo-cover recovery")
def _recovery(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    trials = _trials(quick, 1000, 100)
    worst = 0.0
    for text in (CIRCLE_ONLY, SALEM):
        f = parse_poly(text)
        data = build_homoclinic(f, window=64)
        for _ in range(trials // 2):
            x = haar_point(f, -48, 48, rng)
            result = recover(data, x)
            lo, hi = result.report.window
            worst = max(worst, x.distance(zeta(data, result.point, (lo, hi)), lo, hi))
    return worst < 1e-7, f"{trials} points, max error {worst:.2e}"


@criterion(10, "Z_f window entropy")
def _zf_entropy(rng: np.random.Generator, quick: bool) -> Check:  # noqa: ARG001, FBT001
    f = parse_poly(SALEM)
    entropy = compute_spectrum(f).entropy_roots
    # Fewer samples miss rare words and bias the conditional estimate low.
    report = zf_window_entropy(f, 12, ZF_SAMPLES, rng)
    passed = (
        abs(report.conditional - entropy) <= ZF_ENTROPY_TOL
        and entropy <= report.estimate <= report.alphabet_bound
    )
    detail = (
        f"conditional {report.conditional:.4f}, (1/N) log count {report.estimate:.4f}, "
        f"log θ ≈ {entropy:.4f}"
    )
    return passed, detail


@criterion(11, "Pajor and Sauer–Shelah")
def _pajor(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    n = 10
    families = _trials(quick, 200, 40)
    for _ in range(families):
        size = int(rng.integers(1, 65))
        family = [np.flatnonzero(rng.random(n) < 0.5).tolist() for _ in range(size)]
        report = pajor_check(family, range(n))
        if not report.pajor_holds or not report.sauer_shelah_holds:
            return False, f"violation on a family of {report.family_size} sets"
        sizes = {len(s) for s in shattered_sets(family, range(n))}
        for k in range(n + 1):
            if report.family_size > sauer_shelah_bound(n, k) and max(sizes) < k:
                return False, f"|F| = {report.family_size} shatters no {k}-set"
    return True, f"{families} families on 10 points, no violations"


@criterion(12, "no homoclinic points")
def _negative_control(rng: np.random.Generator, quick: bool) -> Check:  # noqa: FBT001
    trials = _trials(quick, 100, 20)
    for text in (CIRCLE_ONLY, "2u^2-u+2"):
        data = build_homoclinic(parse_poly(text), window=64)
        report = verify_no_homoclinic(data, trials, 64, rng=rng)
        if not report.verdict:
            return False, f"{text}: {trials - report.nondecaying} candidates decay"
    return True, f"{trials} candidates each, none decay"


def run_acceptance(
    only: Iterable[int] | None = None,
    seed: int = 0,
    *,
    quick: bool = False,
) -> list[CriterionResult]:
    """Run the selected criteria in order; errors count as failures."""
    numbers = sorted(CRITERIA) if only is None else sorted(set(only))
    unknown = [n for n in numbers if n not in CRITERIA]
    if unknown:
        _err_msg = f"Unknown acceptance criteria {unknown}; choose from 1..{max(CRITERIA)}."
        raise HomoclinicConfigurationError(_err_msg)

    results = []
    for number in numbers:
        item = CRITERIA[number]
        rng = np.random.default_rng(np.random.SeedSequence([seed, number]))
        start = time.perf_counter()
        try:
            passed, detail = item.check(rng, quick)
        except HomoclinicError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        seconds = time.perf_counter() - start
        level = logging.INFO if passed else logging.WARNING
        logger.log(level, "criterion %d (%s): %s", number, item.name, detail)
        results.append(CriterionResult(number, item.name, passed, detail, seconds))
    return results

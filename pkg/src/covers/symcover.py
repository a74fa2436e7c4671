"""Symbolic covers ξ of expansive α_f: coding, decoding and shadowing."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from covers.exceptions import (
    BranchError,
    HomoclinicConfigurationError,
    InvalidPointError,
    NumericalError,
    WindowError,
)
from covers.homoclinic import HomoclinicData, Which, rho, torus_distance
from covers.laurent import (
    LaurentPoly,
    SeqKind,
    SeqWindow,
    Tail,
    TailKind,
    apply_poly_shift,
    canonicalize,
    one_norm,
    torus_wrap,
)
from covers.spectra import Spectrum, compute_spectrum, pisot_root

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Sequence

    from numpy.typing import NDArray

__all__: list[str] = [
    "DECODE_TOL",
    "TRUNCATION_TOL",
    "CoverSeq",
    "FixedPointWindows",
    "InjectivityReport",
    "Reduction",
    "ShadowResult",
    "XfPoint",
    "alphabet_entropy",
    "beta_admissible",
    "beta_encode",
    "beta_injectivity",
    "block_point",
    "check_alphabet_entropy",
    "decode",
    "fixed_point_windows",
    "haar_coordinates",
    "haar_point",
    "homoclinic_convolution",
    "integer_image",
    "interior_window",
    "is_golden_mean_admissible",
    "kappa_lift",
    "parry_expansion",
    "second_code",
    "specification_gap",
    "specification_shadow",
    "wstar_reduce",
    "xi",
    "xi_bar",
]

logger = logging.getLogger(__name__)

DECODE_TOL: float = 1e-8
TRUNCATION_TOL: float = 1e-9
_DYADIC_BITS: int = 53


@dataclass(frozen=True, eq=False)
class XfPoint:
    """A point of X_f, given by its coordinates on a window."""

    coords: SeqWindow

    def __post_init__(self) -> None:
        """Only torus windows are points."""
        if self.coords.kind is not SeqKind.TORUS:
            _err_msg = f"Points of X_f need torus coordinates, not {self.coords.kind.value}."
            raise InvalidPointError(_err_msg)

    @property
    def lo(self) -> int:
        """First coordinate index."""
        return self.coords.lo

    @property
    def hi(self) -> int:
        """Last coordinate index."""
        return self.coords.hi

    def shift(self, k: int = 1) -> XfPoint:
        """Return α_f^k x."""
        return XfPoint(self.coords.shift(k))

    def residual(self, f: LaurentPoly) -> float:
        """max torus distance of f(σ̄)x from 0 on the window."""
        unknown = SeqWindow(self.lo, self.coords.values, SeqKind.TORUS)
        return float(torus_distance(apply_poly_shift(f, unknown).values).max())

    def distance(self, other: XfPoint, lo: int | None = None, hi: int | None = None) -> float:
        """max torus distance between coordinates on [lo, hi]."""
        lo = max(self.lo, other.lo) if lo is None else lo
        hi = min(self.hi, other.hi) if hi is None else hi
        idx = np.arange(lo, hi + 1)
        return float(torus_distance(self.coords.take(idx), other.coords.take(idx)).max())

    @classmethod
    def from_torus(
        cls, f: LaurentPoly, initial: Sequence[float], lo: int, hi: int
    ) -> XfPoint:
        """The point with x_0..x_{m-1} = initial, for |f_0| = |f_m| = 1."""
        g = canonicalize(f)
        if abs(g.trailing) != 1 or g.leading != 1:
            _err_msg = f"{f} is not unimodular; initial coordinates do not fix a point."
            raise HomoclinicConfigurationError(_err_msg)
        if len(initial) != g.span:
            _err_msg = f"{f} needs {g.span} initial coordinates, got {len(initial)}."
            raise HomoclinicConfigurationError(_err_msg)
        seed = [Fraction(float(c)) % 1 for c in initial]
        values = _propagate(g, seed, lo, hi, np.random.default_rng(0))
        return cls(SeqWindow(lo, torus_wrap([float(v) for v in values]), SeqKind.TORUS))


@dataclass(frozen=True, eq=False)
class CoverSeq:
    """An integer sequence v with ‖v‖∞ <= alphabet_bound."""

    v: SeqWindow
    alphabet_bound: int

    def __post_init__(self) -> None:
        """Check the kind and the alphabet."""
        if self.v.kind is not SeqKind.INTEGER:
            _err_msg = f"Cover sequences are integer valued, not {self.v.kind.value}."
            raise HomoclinicConfigurationError(_err_msg)
        if self.v.sup_norm() > self.alphabet_bound:
            _err_msg = f"A symbol exceeds the alphabet bound {self.alphabet_bound}."
            raise HomoclinicConfigurationError(_err_msg)

    @classmethod
    def finite(
        cls, values: Sequence[int], lo: int = 0, alphabet_bound: int | None = None
    ) -> CoverSeq:
        """A finitely supported sequence, zero outside [lo, lo + len - 1]."""
        window = SeqWindow(lo, list(values), SeqKind.INTEGER, Tail.zero(), Tail.zero())
        bound = int(window.sup_norm()) if alphabet_bound is None else alphabet_bound
        return cls(window, bound)

    @property
    def values(self) -> NDArray[np.int64]:
        """The materialized symbols."""
        return self.v.values

    def shift(self, k: int = 1) -> CoverSeq:
        """Return σ̄^k v."""
        return CoverSeq(self.v.shift(k), self.alphabet_bound)


def _propagate(
    g: LaurentPoly,
    seed: Sequence[Fraction],
    lo: int,
    hi: int,
    rng: np.random.Generator,
) -> list[Fraction]:
    """Extend x_0..x_{m-1} to [lo, hi] exactly through Σ g_k x_{n+k} ≡ 0.

    When |g_m| or |g_0| exceeds one a branch is picked at random.
    """
    a = g.coeffs
    m = g.span
    x = dict(enumerate(seed))
    for n in range(m, hi + 1):
        s = -sum(a[k] * x[n - m + k] for k in range(m))
        branch = int(rng.integers(abs(a[m]))) if abs(a[m]) > 1 else 0
        x[n] = ((s + branch) / a[m]) % 1
    for n in range(-1, lo - 1, -1):
        s = -sum(a[k] * x[n + k] for k in range(1, m + 1))
        branch = int(rng.integers(abs(a[0]))) if abs(a[0]) > 1 else 0
        x[n] = ((s + branch) / a[0]) % 1
    return [x[n] for n in range(lo, hi + 1)]


def _dyadic_seed(rng: np.random.Generator, m: int) -> list[Fraction]:
    scale = 1 << _DYADIC_BITS
    return [Fraction(int(k), scale) for k in rng.integers(0, scale, size=m)]


def haar_point(
    f: LaurentPoly, lo: int, hi: int, rng: np.random.Generator
) -> XfPoint:
    """A Haar-random point of X_f on [lo, hi]."""
    if hi < lo:
        _err_msg = f"Empty window [{lo}, {hi}]."
        raise WindowError(_err_msg)
    g = canonicalize(f)
    base, top = min(lo, 0), max(hi, g.span - 1)
    values = _propagate(g, _dyadic_seed(rng, g.span), base, top, rng)
    window = torus_wrap([float(v) for v in values[lo - base : hi - base + 1]])
    return XfPoint(SeqWindow(lo, window, SeqKind.TORUS))


def haar_coordinates(
    f: LaurentPoly, lo: int, hi: int, count: int, rng: np.random.Generator
) -> NDArray[np.float64]:
    """`count` Haar-random points of X_f as rows of coordinates on [lo, hi].

    Unimodular f runs in vectorized integer arithmetic on 53-bit dyadics.
    """
    g = canonicalize(f)
    if abs(g.trailing) != 1 or g.leading != 1 or one_norm(g) >= 1 << 10:
        return np.array([haar_point(g, lo, hi, rng).coords.values for _ in range(count)])

    a = g.coeffs
    m = g.span
    scale = 1 << _DYADIC_BITS
    base, top = min(lo, 0), max(hi, m - 1)
    x = np.zeros((count, top - base + 1), dtype=np.int64)
    x[:, -base : -base + m] = rng.integers(0, scale, size=(count, m))
    for n in range(m, top + 1):
        s = -sum(a[k] * x[:, n - m + k - base] for k in range(m))
        x[:, n - base] = np.mod(s, scale)
    for n in range(-1, base - 1, -1):
        s = -sum(a[k] * x[:, n + k - base] for k in range(1, m + 1))
        x[:, n - base] = np.mod(s * a[0], scale)
    return x[:, lo - base : hi - base + 1] / scale


def decode(
    f: LaurentPoly,
    x: XfPoint,
    *,
    spectrum: Spectrum | None = None,
    tol: float = DECODE_TOL,
) -> CoverSeq:
    """The symbols v = f(σ̄)y of the lift y of x into [0, 1)^ℤ.

    The result lives on [x.lo - low, x.hi - degree] with unknown tails.
    """
    spectrum = compute_spectrum(f) if spectrum is None else spectrum
    if not spectrum.expansive:
        _err_msg = f"{f} is nonexpansive; use covers.pseudocover.sample_Zf."
        raise BranchError(_err_msg)
    return integer_image(f, x.coords, tol)


def integer_image(f: LaurentPoly, y: SeqWindow, tol: float) -> CoverSeq:
    """Round f(σ̄)y to integers, checking that y lies in W_f."""
    tail = y.left if y.period is not None else Tail()
    lifted = SeqWindow(y.lo, y.as_array(), SeqKind.REAL, tail, tail)
    image = apply_poly_shift(f, lifted)
    rounded = np.rint(image.values)
    residual = float(np.abs(image.values - rounded).max())
    if residual > tol:
        _err_msg = f"f(σ̄)y is {residual:.3g} away from an integer sequence; x is not in X_f."
        raise InvalidPointError(_err_msg)
    symbols = SeqWindow(image.lo, rounded.astype(np.int64), SeqKind.INTEGER, image.left, image.right)
    bound = max(one_norm(f) * math.ceil(max(1.0, y.sup_norm())), int(symbols.sup_norm()))
    return CoverSeq(symbols, bound)


def _kernel(
    data: HomoclinicData,
    out_idx: NDArray[np.int64],
    src_idx: NDArray[np.int64],
    *,
    split: bool,
) -> NDArray[np.float64]:
    diff = out_idx[:, None] - src_idx[None, :]
    if not split:
        return data.evaluate(Which.DELTA, diff)
    kernel = np.empty(diff.shape, dtype=float)
    negative = src_idx < 0
    if negative.any():
        kernel[:, negative] = data.evaluate(Which.PLUS, diff[:, negative])
    if (~negative).any():
        kernel[:, ~negative] = data.evaluate(Which.MINUS, diff[:, ~negative])
    return kernel


def _outside(
    data: HomoclinicData, k: int, lo: int, hi: int, *, split: bool
) -> tuple[float, float]:
    """Σ|kernel(k, n)| over n < lo and over n > hi."""
    if not split:
        return (
            data.tail_sum(Which.DELTA, "right", k - lo + 1),
            data.tail_sum(Which.DELTA, "left", k - hi - 1),
        )
    edge = min(lo, 0)
    left = data.tail_sum(Which.PLUS, "right", k - edge + 1)
    if lo > 0:
        left += float(np.abs(data.evaluate(Which.MINUS, k - np.arange(0, lo))).sum())
    edge = max(hi, -1)
    right = data.tail_sum(Which.MINUS, "left", k - edge - 1)
    if hi < -1:
        right += float(np.abs(data.evaluate(Which.PLUS, k - np.arange(hi + 1, 0))).sum())
    return left, right


def _truncation(
    data: HomoclinicData,
    v: SeqWindow,
    out_idx: NDArray[np.int64],
    *,
    split: bool,
    sup: float,
) -> NDArray[np.float64]:
    """Bound on the contribution of v outside its window, per output index."""
    bounds = np.zeros(len(out_idx))
    for i, k in enumerate(out_idx):
        left, right = _outside(data, int(k), v.lo, v.hi, split=split)
        if v.left.kind is not TailKind.ZERO:
            bounds[i] += sup * left
        if v.right.kind is not TailKind.ZERO:
            bounds[i] += sup * right
    return bounds


def interior_window(
    data: HomoclinicData,
    v: SeqWindow,
    tol: float = TRUNCATION_TOL,
    *,
    split: bool = False,
    sup: float | None = None,
) -> tuple[int, int]:
    """The widest [lo, hi] inside v's window with truncation bound <= tol."""
    sup = v.sup_norm() if sup is None else sup
    idx = v.indices()
    ok = _truncation(data, v, idx, split=split, sup=sup) <= tol
    if not ok.any():
        _err_msg = f"No index of [{v.lo}, {v.hi}] has truncation bound below {tol}."
        raise WindowError(_err_msg)
    return int(idx[ok].min()), int(idx[ok].max())


def homoclinic_convolution(
    data: HomoclinicData,
    v: SeqWindow,
    lo: int,
    hi: int,
    *,
    split: bool,
    tol: float = TRUNCATION_TOL,
    sup: float | None = None,
) -> SeqWindow:
    """Σ_n v_n w_{k-n} on [lo, hi], with w = w^Δ, or w⁺/w⁻ split at n = 0.

    Periodic v is extended until the rest is below tol; other unknown
    tails must already keep the truncation bound below tol.
    """
    source = v
    sup = v.sup_norm() if sup is None else sup
    out_idx = np.arange(lo, hi + 1)
    if v.period is not None:
        margin = 4 * v.period
        while True:
            source = v.extended(min(v.lo, lo) - margin, max(v.hi, hi) + margin)
            if _truncation(data, source, out_idx, split=split, sup=sup).max() <= tol * 1e-2:
                break
            margin *= 2
            if margin > 1 << 16:
                _err_msg = "Periodic extension did not converge."
                raise NumericalError(_err_msg)
    else:
        worst = float(_truncation(data, v, out_idx, split=split, sup=sup).max())
        if worst > tol:
            _err_msg = (
                f"Truncation bound {worst:.3g} on [{lo}, {hi}] exceeds {tol}; "
                "widen the window or shrink the output range."
            )
            raise WindowError(_err_msg)

    values = _kernel(data, out_idx, source.indices(), split=split) @ source.as_array()
    return SeqWindow(lo, values, SeqKind.REAL)


def _default_window(
    data: HomoclinicData, v: SeqWindow, tol: float, *, split: bool
) -> tuple[int, int]:
    both_zero = v.left.kind is TailKind.ZERO and v.right.kind is TailKind.ZERO
    if both_zero or v.period is not None:
        return v.lo, v.hi
    return interior_window(data, v, tol, split=split)


def xi_bar(
    data: HomoclinicData,
    v: CoverSeq,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> SeqWindow:
    """ξ̄(v)_k = Σ_n v_n w^Δ_{k-n}, for expansive f."""
    data.require_expansive()
    lo, hi = out_window or _default_window(data, v.v, tol, split=False)
    return homoclinic_convolution(data, v.v, lo, hi, split=False, tol=tol)


def xi(
    data: HomoclinicData,
    v: CoverSeq,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> XfPoint:
    """ξ(v) = ρ(ξ̄(v)), a point of X_f."""
    return XfPoint(rho(xi_bar(data, v, out_window, tol=tol)))


def specification_gap(data: HomoclinicData, eps: float) -> tuple[int, int]:
    """(N(ε), r): r is the least margin with 2‖f‖₁ Σ_{|j|>r}|w^Δ_j| < ε/2."""
    if eps <= 0:
        _err_msg = f"ε must be positive, got {eps}."
        raise HomoclinicConfigurationError(_err_msg)
    norm = one_norm(data.poly)
    for r in range(1 << 16):
        tails = data.tail_sum(Which.DELTA, "right", r + 1) + data.tail_sum(
            Which.DELTA, "left", -r - 1
        )
        if 2 * norm * tails < eps / 2:
            return 2 * r + data.poly.span, r
    _err_msg = f"No margin reaches ε = {eps}."
    raise NumericalError(_err_msg)


@dataclass(frozen=True, eq=False)
class ShadowResult:
    """A shadowing point and how closely it follows each block."""

    point: XfPoint
    errors: tuple[float, ...]
    gap: int
    margin: int
    period: int | None = None
    periodicity_error: float | None = None


def block_point(
    f: LaurentPoly, initial: Sequence[float], lo: int, hi: int, margin: int
) -> XfPoint:
    """The point with x_0..x_{m-1} = initial on enough coordinates to shadow [lo, hi]."""
    pad = margin + f.span + 1
    return XfPoint.from_torus(f, initial, lo - pad + f.low, hi + pad + f.degree)


def specification_shadow(
    data: HomoclinicData,
    blocks: Sequence[tuple[tuple[int, int], XfPoint]],
    eps: float,
    *,
    period: int | None = None,
    tol: float = TRUNCATION_TOL,
) -> ShadowResult:
    """A point y with d(α^k x_I, α^k y) < ε for k in each block I.

    Blocks must be separated by at least N(ε). With `period`, y is
    α-periodic with that period.
    """
    data.require_expansive()
    if not blocks:
        _err_msg = "Shadowing needs at least one block."
        raise HomoclinicConfigurationError(_err_msg)
    gap, margin = specification_gap(data, eps)
    m = data.poly.span
    ordered = sorted(blocks, key=lambda block: block[0][0])
    for ((_, b), _), ((a, _), _) in zip(ordered, ordered[1:]):
        if a - b < gap:
            _err_msg = f"gap violation: blocks ending at {b} and starting at {a} need a gap of {gap}."
            raise HomoclinicConfigurationError(_err_msg)

    first = ordered[0][0][0]
    last = ordered[-1][0][1] + m - 1
    span_lo, span_hi = first - margin, last + margin
    values = np.zeros(span_hi - span_lo + 1, dtype=np.int64)
    for (a, b), point in ordered:
        dlo, dhi = a - margin, b + m - 1 + margin
        cover = decode(data.poly, point, spectrum=data.spectrum)
        if cover.v.lo > dlo or cover.v.hi < dhi:
            _err_msg = (
                f"Block [{a}, {b}] needs its point on at least "
                f"[{dlo + data.poly.low}, {dhi + data.poly.degree}]."
            )
            raise WindowError(_err_msg)
        values[dlo - span_lo : dhi - span_lo + 1] = cover.v.take(np.arange(dlo, dhi + 1))

    bound = one_norm(data.poly)
    periodicity_error = None
    if period is None:
        v = SeqWindow(span_lo, values, SeqKind.INTEGER, Tail.zero(), Tail.zero())
        point = xi(data, CoverSeq(v, bound), (first, last), tol=tol)
    else:
        diameter = last - first
        if period < gap + diameter:
            _err_msg = f"gap violation: period {period} is below N(ε) + diam = {gap + diameter}."
            raise HomoclinicConfigurationError(_err_msg)
        cycle = np.zeros(period, dtype=np.int64)
        cycle[: len(values)] = values
        v = SeqWindow(span_lo, cycle, SeqKind.INTEGER, Tail.periodic(period), Tail.periodic(period))
        point = xi(data, CoverSeq(v, bound), (first, max(last, first + period + m - 1)), tol=tol)
        idx = np.arange(first, first + m)
        periodicity_error = float(
            torus_distance(point.coords.take(idx), point.coords.take(idx + period)).max()
        )

    errors = tuple(point.distance(x, a, b + m - 1) for (a, b), x in ordered)
    if max(errors) >= eps:
        _err_msg = f"Shadowing error {max(errors):.3g} is not below ε = {eps}."
        raise NumericalError(_err_msg)
    logger.info("shadowed %d blocks with gap %d, errors %s", len(blocks), gap, errors)
    return ShadowResult(point, errors, gap, margin, period, periodicity_error)


def beta_encode(data: HomoclinicData, x: XfPoint) -> CoverSeq:
    """Greedy β-expansion digits of x for a Pisot f in canonical form.

    The digits lie in {0, ..., ⌈β⌉ - 1} and satisfy v = f(σ̄)y for a
    bounded lift y of x, so ξ(v) agrees with x away from the window ends.
    """
    if not data.spectrum.flags.pisot:
        _err_msg = f"{data.poly} is not a Pisot polynomial."
        raise BranchError(_err_msg)
    g = data.spectrum.poly
    if data.poly != g:
        _err_msg = f"Write {data.poly} in canonical form {g} before β-encoding."
        raise HomoclinicConfigurationError(_err_msg)

    beta = pisot_root(data.spectrum)
    a = g.coeffs
    m = g.span
    # Left eigenvector of the companion matrix with ℓ_{m-1} = 1.
    ell = np.zeros(m)
    ell[m - 1] = 1.0
    for j in range(m - 1, 0, -1):
        ell[j - 1] = beta * ell[j] + a[j]

    coords = x.coords.as_array()
    count = len(coords) - m
    if count < 1:
        _err_msg = f"β-encoding needs more than {m} coordinates."
        raise WindowError(_err_msg)
    offsets = [0] * m
    offsets[-1] = math.floor(-float(ell @ coords[:m]))
    digits = []
    for i in range(count):
        window = coords[i : i + m]
        t = -float(ell @ (window + np.array(offsets, dtype=float)))
        digit = math.floor(beta * t)
        digits.append(digit)
        carry = round(-float(np.dot(a[:m], window)) - coords[i + m])
        offsets = [*offsets[1:], carry - sum(c * n for c, n in zip(a[:m], offsets)) + digit]

    bound = max(math.ceil(beta) - 1, max(abs(d) for d in digits))
    return CoverSeq(SeqWindow(x.lo, digits, SeqKind.INTEGER), bound)


@dataclass(frozen=True)
class FixedPointWindows:
    """Lift intervals that separate the κ = |f(1)| fixed points of α_f.

    The fixed point j/κ lies in `inner` = [-1/2κ, 1 - 1/2κ), so its symbols
    are the constant f(1)·j/κ. Each j/κ has exactly one lift in the open
    neighbourhood `outer` = (-5/8κ, 1 - 3/8κ).
    """

    kappa: int

    @property
    def inner(self) -> tuple[float, float]:
        """J = [-1/2κ, 1 - 1/2κ]."""
        return -1 / (2 * self.kappa), 1 - 1 / (2 * self.kappa)

    @property
    def outer(self) -> tuple[float, float]:
        """J̃ = (-5/8κ, 1 - 3/8κ)."""
        return -5 / (8 * self.kappa), 1 - 3 / (8 * self.kappa)

    @property
    def fixed_points(self) -> tuple[Fraction, ...]:
        """The constants j/κ, j = 0..κ-1."""
        return tuple(Fraction(j, self.kappa) for j in range(self.kappa))

    def lift(self, values: NDArray[np.float64] | Sequence[float]) -> NDArray[np.float64]:
        """Representatives of torus values in [-1/2κ, 1 - 1/2κ)."""
        lo = self.inner[0]
        return np.mod(np.asarray(values, dtype=float) - lo, 1.0) + lo

    def preimages(self, t: float) -> list[float]:
        """All t + n, n ∈ ℤ, inside J̃."""
        lo, hi = self.outer
        return [t + n for n in range(math.ceil(lo - t), math.floor(hi - t) + 1) if lo < t + n < hi]


def fixed_point_windows(f: LaurentPoly) -> FixedPointWindows:
    """The lift intervals for f; α_f then has |f(1)| fixed points."""
    kappa = abs(sum(f.coeffs))
    if kappa == 0:
        _err_msg = f"{f} vanishes at 1, so α_f has infinitely many fixed points."
        raise BranchError(_err_msg)
    return FixedPointWindows(kappa)


def kappa_lift(data: HomoclinicData, x: XfPoint, *, tol: float = DECODE_TOL) -> CoverSeq:
    """The symbols f(σ̄)y of the lift y of x into [-1/2κ, 1 - 1/2κ)^ℤ.

    Unlike `decode`, points close to a fixed point get symbols close to the
    fixed point's constant word.
    """
    if not data.spectrum.expansive:
        _err_msg = f"{data.poly} is nonexpansive; use covers.pseudocover.sample_Zf."
        raise BranchError(_err_msg)
    windows = fixed_point_windows(data.poly)
    y = SeqWindow(x.lo, windows.lift(x.coords.as_array()), SeqKind.REAL)
    return integer_image(data.poly, y, tol)


def parry_expansion(beta: float, length: int, *, tol: float = 1e-9) -> list[int]:
    """The first `length` digits of the quasi-greedy β-expansion of 1.

    A finite greedy expansion d_1..d_n is replaced by (d_1..d_{n-1}(d_n - 1))^∞.
    """
    digits: list[int] = []
    t = 1.0
    while len(digits) < length:
        digit = math.floor(beta * t + tol)
        digits.append(digit)
        t = max(beta * t - digit, 0.0)
        if t < tol:
            period = [*digits[:-1], digit - 1]
            return [period[i % len(period)] for i in range(length)]
    return digits


def beta_admissible(digits: Sequence[int], expansion: Sequence[int]) -> bool:
    """No tail of `digits` is lexicographically above the expansion of 1.

    Each tail is compared on its first len(expansion) digits.
    """
    for k in range(len(digits)):
        for d, e in zip(digits[k:], expansion):
            if d != e:
                if d > e:
                    return False
                break
    return True


def second_code(
    f: LaurentPoly,
    digits: Sequence[int],
    expansion: Sequence[int],
    *,
    alphabet: int,
    support: int = 3,
    margin: int = 8,
) -> list[int] | None:
    """Another admissible word v + f(σ̄)h with h on at most `support` sites.

    Changes stay `margin` sites away from the ends of the word. Returns None
    when no such word exists, so ξ identifies v with nothing that differs
    from it on a finite block of that size.
    """
    v = np.asarray(digits, dtype=np.int64)
    for pattern in itertools.product((-1, 0, 1), repeat=support):
        if pattern[0] == 0:
            continue
        image = apply_poly_shift(
            f, SeqWindow(0, list(pattern), SeqKind.INTEGER, Tail.zero(), Tail.zero())
        )
        g = image.values
        if len(g) > len(v) - 2 * margin:
            continue
        windows = sliding_window_view(v, len(g))
        shifted = windows + g
        inside = ((shifted >= 0) & (shifted <= alphabet)).all(axis=1)
        for start in np.flatnonzero(inside):
            if not margin <= start <= len(v) - len(g) - margin:
                continue
            candidate = v.copy()
            candidate[start : start + len(g)] += g
            if beta_admissible(candidate.tolist(), expansion):
                return candidate.tolist()
    return None


@dataclass(frozen=True)
class InjectivityReport:
    """How often sampled points of X_f had a second β-code."""

    samples: int
    collisions: int
    support: int

    @property
    def rate(self) -> float:
        """The fraction of samples with a second code."""
        return self.collisions / self.samples if self.samples else 0.0


def beta_injectivity(
    data: HomoclinicData,
    rng: np.random.Generator,
    samples: int,
    *,
    window: int = 48,
    support: int = 3,
) -> InjectivityReport:
    """Look for pairs of β-codes with the same image among Haar-random points.

    Random points are doubly transitive almost surely, so an almost
    one-to-one β-cover gives no collisions.
    """
    beta = pisot_root(data.spectrum)
    alphabet = math.ceil(beta) - 1
    length = 2 * window + 1
    expansion = parry_expansion(beta, length)
    collisions = 0
    for _ in range(samples):
        x = haar_point(data.poly, -window, window, rng)
        cover = beta_encode(data, x)
        other = second_code(
            data.poly, cover.values.tolist(), expansion, alphabet=alphabet, support=support
        )
        if other is not None:
            logger.debug("Second β-code for x_0 = %.12f: %s", x.coords.at(0), other)
            collisions += 1
    logger.info("β-cover: %d of %d sampled points had a second code", collisions, samples)
    return InjectivityReport(samples, collisions, support)


@dataclass(frozen=True, eq=False)
class Reduction:
    """Lexicographically reduced representative of a coset v + f(σ̄)h."""

    cover: CoverSeq
    h: dict[int, int]
    exhausted: bool


class _Exhausted(Exception):
    pass


def _lex_min(
    g: LaurentPoly,
    values: list[int],
    alphabet: int,
    support: int,
    coeff_bound: int,
    budget: int,
) -> tuple[list[int], dict[int, int]]:
    """Depth-first search over moves v -> v - c·g(σ̄)δ_{i+m}, smallest v first."""
    a = g.coeffs
    m = g.span
    n = len(values)
    steps = n - m
    r = list(values)
    chosen = [0] * max(steps, 0)
    nodes = 0

    def feasible(i: int) -> bool:
        if abs(r[i]) > alphabet:
            return False
        for t in range(i + 1, min(i + m, n - 1) + 1):
            k_lo = i + m - t + 1
            k_hi = min(t, steps - 1) + m - t
            reach = coeff_bound * sum(abs(c) for c in a[k_lo : k_hi + 1])
            if r[t] - reach > alphabet or r[t] + reach < -alphabet:
                return False
        return True

    def visit(i: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Exhausted
        if i >= steps:
            return all(abs(r[t]) <= alphabet for t in range(max(steps, 0), n))
        for c in range(coeff_bound, -coeff_bound - 1, -1):
            if c and used >= support:
                continue
            for k in range(m + 1):
                r[i + m - k] -= c * a[k]
            chosen[i] = c
            if feasible(i) and visit(i + 1, used + (c != 0)):
                return True
            for k in range(m + 1):
                r[i + m - k] += c * a[k]
        chosen[i] = 0
        return False

    if not visit(0, 0):
        return list(values), {}
    return r, {i + m: c for i, c in enumerate(chosen) if c}


def wstar_reduce(
    f: LaurentPoly,
    v: CoverSeq,
    h_support_bound: int = 8,
    h_coeff_bound: int = 2,
    *,
    node_budget: int = 200_000,
) -> Reduction:
    """Lexicographic minimum of v - f(σ̄)h over small h inside the alphabet.

    Repeats the search until nothing changes, so reducing twice gives the
    same sequence. When the node budget runs out the best sequence so far
    is returned and `exhausted` is set.
    """
    g = canonicalize(f)
    current = [int(c) for c in v.values]
    total: dict[int, int] = {}
    exhausted = False
    while True:
        try:
            best, moves = _lex_min(
                g, current, v.alphabet_bound, h_support_bound, h_coeff_bound, node_budget
            )
        except _Exhausted:
            exhausted = True
            break
        if best == current:
            break
        for pos, c in moves.items():
            total[v.v.lo + pos] = total.get(v.v.lo + pos, 0) + c
        current = best
    if exhausted:
        logger.warning("reduction of %d symbols stopped after %d nodes", len(current), node_budget)

    window = SeqWindow(v.v.lo, current, SeqKind.INTEGER, v.v.left, v.v.right)
    return Reduction(CoverSeq(window, v.alphabet_bound), total, exhausted)


def alphabet_entropy(f: LaurentPoly, bound: int | None = None) -> float:
    """log(2A + 1), the entropy of the full shift on {-A..A}; A defaults to ‖f‖₁."""
    return math.log(2 * (one_norm(f) if bound is None else bound) + 1)


def check_alphabet_entropy(
    f: LaurentPoly, spectrum: Spectrum, bound: int | None = None
) -> None:
    """Raise when the alphabet {-A..A} cannot carry the entropy of α_f."""
    if alphabet_entropy(f, bound) <= spectrum.entropy_roots:
        _alphabet = one_norm(f) if bound is None else bound
        _err_msg = (
            f"The alphabet -{_alphabet}..{_alphabet} is too small for {f}: "
            f"log({2 * _alphabet + 1}) <= h = {spectrum.entropy_roots:.4f}."
        )
        raise HomoclinicConfigurationError(_err_msg)


def is_golden_mean_admissible(values: Sequence[int]) -> bool:
    """Whether a 0/1 word has no two adjacent ones."""
    return all(v in (0, 1) for v in values) and not any(
        a and b for a, b in zip(values, values[1:])
    )

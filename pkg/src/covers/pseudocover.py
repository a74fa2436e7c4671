"""Pseudo-covers ξ* of nonexpansive α_f and the skew-product recovery.

For f with roots on the unit circle there is no summable homoclinic
point. The split map

    ξ̄*(v)_k = Σ_{n<0} v_n w⁺_{k-n} + Σ_{n>=0} v_n w⁻_{k-n}

still satisfies f(σ̄)ξ̄*(v) = v, but it fails to commute with the shift
by the central cocycle d(n, v), which lives in the span of the unit-circle
roots. Recovering a point from its symbols means subtracting the matching
central vector; the pair (v, w) then moves under the skew map τ.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
import operator
from collections import defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from covers.exceptions import (
    BranchError,
    BudgetExceededError,
    HomoclinicConfigurationError,
    InvalidPointError,
    NumericalError,
    WindowError,
)
from covers.homoclinic import HomoclinicData, rho, torus_distance
from covers.laurent import (
    Growth,
    LaurentPoly,
    SeqKind,
    SeqWindow,
    Tail,
    TailKind,
    one_norm,
)
from covers.spectra import Spectrum, compute_spectrum
from covers.symcover import (
    DECODE_TOL,
    TRUNCATION_TOL,
    CoverSeq,
    XfPoint,
    alphabet_entropy,
    haar_coordinates,
    haar_point,
    homoclinic_convolution,
    integer_image,
    interior_window,
)

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Hashable, Iterable, Sequence

    from numpy.typing import NDArray

__all__: list[str] = [
    "CORRECTION_TOL",
    "CentralVector",
    "CorrectionReport",
    "DiskCount",
    "DiskMethod",
    "EntropyRow",
    "MembershipReport",
    "PajorReport",
    "Recovery",
    "SkewPoint",
    "VLReport",
    "Verdict",
    "WindowEntropyReport",
    "central_correction",
    "cocycle_d",
    "disk_count",
    "lift_Yf",
    "pajor_check",
    "recover",
    "sample_Zf",
    "sauer_shelah_bound",
    "shattered_sets",
    "tau_step",
    "vf_membership",
    "vl_experiment",
    "xi_star",
    "xi_star_bar",
    "zeta",
    "zeta_bar",
    "zf_window_entropy",
]

logger = logging.getLogger(__name__)

CORRECTION_TOL: float = 1e-7
_DISK_SLACK: float = 1e-12


@dataclass(frozen=True, eq=False)
class CentralVector:
    """An element Σ c_θ θ^k of the central subspace W_f∘."""

    roots: tuple[complex, ...]
    coefficients: NDArray[np.complex128]

    def __post_init__(self) -> None:
        """Store coefficients as a read-only complex array."""
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if len(coeffs) != len(self.roots):
            _err_msg = f"{len(self.roots)} roots need as many coefficients, got {len(coeffs)}."
            raise HomoclinicConfigurationError(_err_msg)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls, roots: Sequence[complex]) -> CentralVector:
        """The zero vector."""
        return cls(tuple(roots), np.zeros(len(roots), dtype=complex))

    @classmethod
    def from_homoclinic(cls, data: HomoclinicData) -> CentralVector:
        """w∘ = w⁻ - w⁺."""
        roots, coeffs = data.circle_coefficients
        return cls(roots, coeffs)

    def _check(self, other: CentralVector) -> None:
        if not np.allclose(self.roots, other.roots):
            _err_msg = "Central vectors over different roots do not combine."
            raise HomoclinicConfigurationError(_err_msg)

    def __add__(self, other: CentralVector) -> CentralVector:
        """Coefficientwise sum."""
        self._check(other)
        return CentralVector(self.roots, self.coefficients + other.coefficients)

    def __sub__(self, other: CentralVector) -> CentralVector:
        """Coefficientwise difference."""
        self._check(other)
        return CentralVector(self.roots, self.coefficients - other.coefficients)

    def __neg__(self) -> CentralVector:
        """Negation."""
        return CentralVector(self.roots, -self.coefficients)

    def shift(self, s: int = 1) -> CentralVector:
        """σ̄^s w, which multiplies c_θ by θ^s."""
        return CentralVector(self.roots, self.coefficients * np.array(self.roots) ** s)

    def realize(self, lo: int, hi: int) -> SeqWindow:
        """The real sequence Σ c_θ θ^k on [lo, hi]."""
        k = np.arange(lo, hi + 1)
        if not self.roots:
            return SeqWindow(lo, np.zeros(len(k)), SeqKind.REAL)
        terms = self.coefficients[:, None] * np.array(self.roots)[:, None] ** k[None, :]
        values = terms.sum(axis=0)
        if np.abs(values.imag).max() > 1e-8 * max(1.0, np.abs(values.real).max()):
            _err_msg = "Central vector is not real."
            raise NumericalError(_err_msg)
        return SeqWindow(lo, values.real, SeqKind.REAL)

    def sup_bound(self) -> float:
        """Σ|c_θ|, a bound for the sup norm of the realization."""
        return float(np.abs(self.coefficients).sum())

    def symmetrized(self) -> CentralVector:
        """Force c at conjugate roots to be conjugate, so realizations are real."""
        roots = np.array(self.roots)
        coeffs = self.coefficients.copy()
        for i, theta in enumerate(roots):
            j = int(np.argmin(np.abs(roots - np.conj(theta))))
            if j == i:
                coeffs[i] = coeffs[i].real
            elif i < j:
                mean = (coeffs[i] + np.conj(coeffs[j])) / 2
                coeffs[i], coeffs[j] = mean, np.conj(mean)
        return CentralVector(self.roots, coeffs)

    def allclose(self, other: CentralVector, tol: float = 1e-9) -> bool:
        """Coefficientwise comparison."""
        self._check(other)
        return bool(np.abs(self.coefficients - other.coefficients).max(initial=0.0) <= tol)


class Verdict(enum.Enum):
    """Outcome of the V_f membership test."""

    BOUNDED = "bounded"
    GROWING = "growing"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MembershipReport:
    """Sup of the two-sided partial sums Σ v_k θ^k over the circle roots."""

    sup: float
    verdict: Verdict
    ratios: tuple[float, ...]


def _partial_sup(theta: complex, v: SeqWindow, left: int, right: int) -> float:
    """max over m, n >= 0 of |Σ_{k=-m}^{n} v_k θ^k|."""
    pos = np.arange(0, right + 1)
    neg = np.arange(-1, -left - 1, -1)
    forward = np.cumsum(np.asarray(v.take(pos), dtype=float) * theta**pos)
    backward = np.concatenate(
        ([0.0], np.cumsum(np.asarray(v.take(neg), dtype=float) * theta ** neg.astype(float)))
    )
    return float(np.abs(backward[:, None] + forward[None, :]).max())


def vf_membership(
    spectrum: Spectrum,
    v: CoverSeq | SeqWindow,
    *,
    growth_ratio: float = 1.6,
    bounded_ratio: float = 1.4,
) -> MembershipReport:
    """Whether the partial sums Σ v_k θ^k stay bounded for every θ in Θ∘.

    Zero and periodic tails give an exact verdict. For unknown tails the
    sup is compared on nested windows; a doubling ratio near 2 means
    linear growth, one near 1 means the sums have settled.
    """
    seq = v.v if isinstance(v, CoverSeq) else v
    roots = [r for r in spectrum.circle if r.imag >= 0]
    if not roots:
        _err_msg = "hyperbolic: there is no unit-circle root to test against"
        raise BranchError(_err_msg)

    zero = seq.left.kind is TailKind.ZERO and seq.right.kind is TailKind.ZERO
    if zero or seq.period is not None:
        if seq.period is None:
            left, right = max(0, -seq.lo), max(0, seq.hi)
        else:
            reach = min(512, max(len(seq), 8 * seq.period))
            left = right = reach
        for theta in roots:
            if seq.period is not None and abs(1 - theta**seq.period) < 1e-9:
                _err_msg = f"θ^{seq.period} = 1 for θ = {theta}; partial sums need not be bounded."
                raise NumericalError(_err_msg)
        sups = [_partial_sup(theta, seq, left, right) for theta in roots]
        return MembershipReport(max(sups), Verdict.BOUNDED, tuple(1.0 for _ in roots))

    if seq.lo > 0 or seq.hi < 0:
        _err_msg = f"The window [{seq.lo}, {seq.hi}] must contain index 0."
        raise WindowError(_err_msg)

    left, right = -seq.lo, seq.hi
    verdicts, ratios, sups = [], [], []
    for theta in roots:
        levels = [
            _partial_sup(theta, seq, left // d, right // d) for d in (4, 2, 1)
        ]
        tiny = 1e-300
        first, second = levels[1] / max(levels[0], tiny), levels[2] / max(levels[1], tiny)
        if levels[2] == 0 or second <= bounded_ratio:
            verdicts.append(Verdict.BOUNDED)
        elif first >= growth_ratio and second >= growth_ratio:
            verdicts.append(Verdict.GROWING)
        else:
            verdicts.append(Verdict.INCONCLUSIVE)
        ratios.append(second)
        sups.append(levels[2])

    verdict = Verdict.BOUNDED
    if Verdict.GROWING in verdicts:
        verdict = Verdict.GROWING
    elif Verdict.INCONCLUSIVE in verdicts:
        verdict = Verdict.INCONCLUSIVE
        logger.warning("V_f membership is inconclusive; ratios %s", ratios)
    return MembershipReport(max(sups), verdict, tuple(ratios))


def xi_star_bar(
    data: HomoclinicData,
    v: CoverSeq,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> SeqWindow:
    """ξ̄*(v) with w⁺ for n < 0 and w⁻ for n >= 0.

    The tails of the result say whether it is bounded or may grow
    linearly, following the V_f membership of v.
    """
    seq = v.v
    exact = seq.period is not None or (
        seq.left.kind is TailKind.ZERO and seq.right.kind is TailKind.ZERO
    )
    if out_window is None:
        out_window = (seq.lo, seq.hi) if exact else interior_window(data, seq, tol, split=True)
    lo, hi = out_window
    values = homoclinic_convolution(data, seq, lo, hi, split=True, tol=tol)

    growth = Growth.BOUNDED
    if not exact and data.spectrum.circle:
        report = vf_membership(data.spectrum, seq)
        growth = Growth.BOUNDED if report.verdict is Verdict.BOUNDED else Growth.LINEAR
    tail = Tail.unknown(growth)
    return SeqWindow(lo, values.values, SeqKind.REAL, tail, tail)


def xi_star(
    data: HomoclinicData,
    v: CoverSeq,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> XfPoint:
    """ξ*(v) = ρ(ξ̄*(v))."""
    return XfPoint(rho(xi_star_bar(data, v, out_window, tol=tol)))


def lift_Yf(x: XfPoint, offset: float = 0.0) -> SeqWindow:  # noqa: N802
    """Lift x coordinatewise into [offset, offset + 1)."""
    values = np.mod(x.coords.as_array() - offset, 1.0) + offset
    tail = x.coords.left if x.coords.period is not None else Tail()
    return SeqWindow(x.lo, values, SeqKind.REAL, tail, tail)


def sample_Zf(  # noqa: N802
    f: LaurentPoly, x: XfPoint, offset: float = 0.0, *, tol: float = DECODE_TOL
) -> CoverSeq:
    """The symbols f(σ̄)y of the lift y = lift_Yf(x, offset)."""
    return integer_image(f, lift_Yf(x, offset), tol)


def cocycle_d(data: HomoclinicData, n: int, v: CoverSeq) -> CentralVector:
    """d(n, v) = σ̄^n ξ̄*(v) - ξ̄*(σ̄^n v) as a central vector.

    Its coefficients are c_θ Σ_{j=0}^{n-1} v_j θ^{n-j} for n > 0 and
    -c_θ Σ_{j=n}^{-1} v_j θ^{n-j} for n < 0.
    """
    roots, coeffs = data.circle_coefficients
    if not roots:
        logger.info("%s has no unit-circle roots; the cocycle vanishes", data.poly)
        return CentralVector.zero(())
    if n == 0:
        return CentralVector.zero(roots)
    js = np.arange(0, n) if n > 0 else np.arange(n, 0)
    weights = np.asarray(v.v.take(js), dtype=float)
    powers = np.array(roots)[:, None] ** (n - js)[None, :]
    sums = powers @ weights
    return CentralVector(roots, coeffs * (sums if n > 0 else -sums))


@dataclass(frozen=True, eq=False)
class CorrectionReport:
    """The central correction R = ξ̄*(f(σ̄)y) - y and its sizes."""

    cover: CoverSeq
    correction: CentralVector
    residual: float
    xi_norm: float
    lift_norm: float
    window: tuple[int, int]

    @property
    def xi_ratio(self) -> float:
        """sup|ξ̄*(v)| / sup|y| on the window."""
        return self.xi_norm / max(self.lift_norm, 1e-300)

    @property
    def correction_ratio(self) -> float:
        """Σ|c_θ| / sup|y|."""
        return self.correction.sup_bound() / max(self.lift_norm, 1e-300)


def central_correction(
    data: HomoclinicData,
    y: SeqWindow,
    *,
    tol: float = CORRECTION_TOL,
    truncation_tol: float = TRUNCATION_TOL,
) -> CorrectionReport:
    """Fit R = ξ̄*(f(σ̄)y) - y by a central vector and check the fit."""
    if data.spectrum.expansive:
        _err_msg = "hyperbolic: ξ̄* inverts f(σ̄) and there is nothing to correct"
        raise BranchError(_err_msg)
    cover = integer_image(data.poly, y, DECODE_TOL)
    v = cover.v
    exact = v.left.kind is TailKind.ZERO and v.right.kind is TailKind.ZERO
    if exact:
        lo, hi = y.lo, y.hi
    else:
        lo, hi = interior_window(data, v, truncation_tol, split=True)
        lo, hi = max(lo, y.lo), min(hi, y.hi)
    m = data.poly.span
    if lo > 0 or hi < m - 1:
        _err_msg = f"The usable window [{lo}, {hi}] does not hold coordinates 0..{m - 1}."
        raise WindowError(_err_msg)

    xs = homoclinic_convolution(data, v, lo, hi, split=True, tol=truncation_tol).values
    ys = np.asarray(y.take(np.arange(lo, hi + 1)), dtype=float)
    remainder = xs - ys

    roots, _ = data.circle_coefficients
    fit = np.arange(0, m)
    basis = np.array(roots)[None, :] ** fit[:, None]
    coeffs, *_ = np.linalg.lstsq(basis, remainder[fit - lo].astype(complex), rcond=None)
    correction = CentralVector(roots, coeffs).symmetrized()
    residual = float(np.abs(remainder - correction.realize(lo, hi).values).max())
    if residual > tol:
        _err_msg = f"ξ̄*(f(σ̄)y) - y is {residual:.3g} away from the central subspace."
        raise NumericalError(_err_msg)
    return CorrectionReport(
        cover=cover,
        correction=correction,
        residual=residual,
        xi_norm=float(np.abs(xs).max()),
        lift_norm=float(np.abs(ys).max()),
        window=(lo, hi),
    )


@dataclass(frozen=True, eq=False)
class SkewPoint:
    """A point (v, w) of the skew product Z_f × W_f∘."""

    v: CoverSeq
    w: CentralVector


@dataclass(frozen=True, eq=False)
class Recovery:
    """A recovered skew point and the correction that produced it."""

    point: SkewPoint
    report: CorrectionReport


def recover(
    data: HomoclinicData,
    x: XfPoint,
    *,
    offset: float = 0.0,
    tol: float = CORRECTION_TOL,
) -> Recovery:
    """(v, w) with ζ(v, w) = x, from the lift of x into [offset, offset + 1)."""
    report = central_correction(data, lift_Yf(x, offset), tol=tol)
    return Recovery(SkewPoint(report.cover, -report.correction), report)


def tau_step(data: HomoclinicData, p: SkewPoint) -> SkewPoint:
    """τ(v, w) = (σ̄v, σ̄w + d(1, v))."""
    return SkewPoint(p.v.shift(1), p.w.shift(1) + cocycle_d(data, 1, p.v))


def zeta_bar(
    data: HomoclinicData,
    p: SkewPoint,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> SeqWindow:
    """ζ̄(v, w) = ξ̄*(v) + w."""
    base = xi_star_bar(data, p.v, out_window, tol=tol)
    values = base.as_array() + p.w.realize(base.lo, base.hi).values
    return SeqWindow(base.lo, values, SeqKind.REAL, base.left, base.right)


def zeta(
    data: HomoclinicData,
    p: SkewPoint,
    out_window: tuple[int, int] | None = None,
    *,
    tol: float = TRUNCATION_TOL,
) -> XfPoint:
    """ζ(v, w) = ρ(ζ̄(v, w))."""
    return XfPoint(rho(zeta_bar(data, p, out_window, tol=tol)))


class DiskMethod(enum.Enum):
    """How disk_count walks the words."""

    ENUMERATE = "enumerate"
    GRID = "grid"


@dataclass(frozen=True)
class DiskCount:
    """Number of words whose prefix sums stay in a disk."""

    count: int
    length: int
    method: DiskMethod

    @property
    def entropy(self) -> float:
        """(1/N) log count."""
        return math.log(self.count) / self.length if self.count else -math.inf


def disk_count(
    theta: complex,
    radius: float,
    alphabet: Sequence[int],
    length: int,
    *,
    method: DiskMethod | str = DiskMethod.ENUMERATE,
    resolution: int = 64,
    node_budget: int = 1 << 24,
) -> DiskCount:
    """Count words a_0..a_{N-1} with |Σ_{j<k} a_j θ^j| <= radius for all k.

    The grid method follows T_k = θ^{-(k-1)} S_k, which obeys
    T_{k+1} = θ^{-1} T_k + a_k, on a square grid of side 2·radius/resolution.
    """
    method = DiskMethod(method)
    if abs(abs(theta) - 1.0) > 1e-9:
        _err_msg = f"|θ| must be 1, got {abs(theta)}."
        raise HomoclinicConfigurationError(_err_msg)
    if length < 1 or not alphabet:
        _err_msg = "Disk counts need a positive length and a nonempty alphabet."
        raise HomoclinicConfigurationError(_err_msg)
    limit = radius + _DISK_SLACK

    if method is DiskMethod.ENUMERATE:
        powers = list(itertools.accumulate([theta] * (length - 1), operator.mul, initial=1 + 0j))
        count = nodes = 0
        stack = [(0, 0j)]
        while stack:
            depth, partial = stack.pop()
            nodes += 1
            if nodes > node_budget:
                _err_msg = f"Disk enumeration stopped after {node_budget} nodes."
                raise BudgetExceededError(_err_msg)
            if depth == length:
                count += 1
                continue
            for a in alphabet:
                nxt = partial + a * powers[depth]
                if abs(nxt) <= limit:
                    stack.append((depth + 1, nxt))
        return DiskCount(count, length, method)

    step = 2 * radius / resolution if radius > 0 else 1.0
    inverse = 1 / theta
    states: dict[tuple[int, int], int] = {(0, 0): 1}
    for _ in range(length):
        nxt_states: dict[tuple[int, int], int] = defaultdict(int)
        for (ix, iy), weight in states.items():
            base = complex(ix * step, iy * step) * inverse
            for a in alphabet:
                t = base + a
                if abs(t) <= limit:
                    nxt_states[round(t.real / step), round(t.imag / step)] += weight
        states = nxt_states
    return DiskCount(sum(states.values()), length, method)


@dataclass(frozen=True)
class EntropyRow:
    """Distinct words among the first `samples` samples."""

    samples: int
    distinct: int
    estimate: float


@dataclass(frozen=True)
class WindowEntropyReport:
    """Window-counting entropy estimate of Z_f."""

    length: int
    rows: tuple[EntropyRow, ...]
    conditional: float
    alphabet_bound: float

    @property
    def estimate(self) -> float:
        """(1/N) log(distinct words) with every sample."""
        return self.rows[-1].estimate


def zf_window_entropy(
    f: LaurentPoly,
    length: int,
    samples: int,
    rng: np.random.Generator,
    *,
    offset: float = 0.0,
    spectrum: Spectrum | None = None,
) -> WindowEntropyReport:
    """Estimate h(Z_f) from the distinct length-N words of Haar samples."""
    spectrum = compute_spectrum(f) if spectrum is None else spectrum
    if spectrum.expansive:
        _err_msg = f"{f} is hyperbolic; Z_f is the symbolic cover itself."
        raise BranchError(_err_msg)
    if length < 1 or samples < 1:
        _err_msg = "Window length and sample count must be positive."
        raise HomoclinicConfigurationError(_err_msg)

    m = f.span
    coords = haar_coordinates(f, 0, length + m - 1, samples, rng)
    lifted = np.mod(coords - offset, 1.0) + offset
    image = sum(c * lifted[:, k : k + length] for k, c in enumerate(f.coeffs))
    words = np.rint(image)
    residual = float(np.abs(image - words).max())
    if residual > DECODE_TOL:
        _err_msg = f"Sampled words are {residual:.3g} away from integers."
        raise InvalidPointError(_err_msg)
    words = words.astype(np.int64)

    rows = []
    for used in sorted({max(1, samples // 4), max(1, samples // 2), samples}):
        distinct = len(np.unique(words[:used], axis=0))
        rows.append(EntropyRow(used, distinct, math.log(distinct) / length))
    shorter = len(np.unique(words[:, : length - 1], axis=0)) if length > 1 else 1
    conditional = math.log(rows[-1].distinct) - math.log(shorter)
    logger.info("%d distinct words of length %d from %d samples", rows[-1].distinct, length, samples)
    return WindowEntropyReport(length, tuple(rows), conditional, alphabet_entropy(f))


def shattered_sets(
    family: Iterable[Iterable[Hashable]],
    ground: Iterable[Hashable] = (),
    *,
    max_ground: int = 20,
) -> set[frozenset[Hashable]]:
    """All subsets T of the ground set with {F ∩ T : F in family} = 2^T."""
    members = [frozenset(member) for member in family]
    elements = sorted(set(ground).union(*members), key=repr)
    if len(elements) > max_ground:
        _err_msg = f"A ground set of {len(elements)} elements exceeds {max_ground}."
        raise BudgetExceededError(_err_msg)
    index = {e: i for i, e in enumerate(elements)}
    masks = {sum(1 << index[e] for e in member) for member in members}

    shattered: set[int] = set()
    for size in range(len(elements) + 1):
        found = False
        for combo in itertools.combinations(range(len(elements)), size):
            target = sum(1 << i for i in combo)
            if any(target & ~(1 << i) not in shattered for i in combo):
                continue
            if len({mask & target for mask in masks}) == 1 << size:
                shattered.add(target)
                found = True
        if not found:
            break
    return {
        frozenset(e for e in elements if target >> index[e] & 1) for target in shattered
    }


def sauer_shelah_bound(n: int, k: int) -> int:
    """Σ_{i<k} C(n, i)."""
    return sum(math.comb(n, i) for i in range(k))


@dataclass(frozen=True)
class PajorReport:
    """Counting checks on the shattered sets of a family."""

    family_size: int
    shattered_count: int
    vc_dimension: int
    ground_size: int

    @property
    def pajor_holds(self) -> bool:
        """|sh(F)| >= |F|."""
        return self.shattered_count >= self.family_size

    @property
    def sauer_shelah_holds(self) -> bool:
        """|F| <= Σ_{i<=d} C(n, i) for the VC dimension d."""
        return self.family_size <= sauer_shelah_bound(self.ground_size, self.vc_dimension + 1)


def pajor_check(
    family: Iterable[Iterable[Hashable]], ground: Iterable[Hashable] = ()
) -> PajorReport:
    """Shattered-set counts for a family of subsets."""
    members = {frozenset(member) for member in family}
    ground_set = set(ground).union(*members)
    shattered = shattered_sets(members, ground_set)
    vc = max((len(s) for s in shattered), default=-1)
    return PajorReport(len(members), len(shattered), vc, len(ground_set))


@dataclass(frozen=True)
class VLReport:
    """Outcome of the shifted-alphabet recovery experiment."""

    alphabet_size: int
    trials: int
    contained: int
    recovered: int
    max_error: float


def vl_experiment(
    data: HomoclinicData,
    alphabet_size: int,
    trials: int,
    rng: np.random.Generator,
    *,
    window: int = 48,
    tol: float = 1e-6,
) -> VLReport:
    """Recover Haar points with symbols shifted into {0, ..., L-1}.

    Subtracting ξ*(v̄) for the constant sequence v̄ = ‖f‖₁ moves the
    symbols of every recovered point into [0, 2‖f‖₁].
    """
    norm = one_norm(data.poly)
    if alphabet_size <= 2 * norm:
        _err_msg = f"L = {alphabet_size} must exceed 2‖f‖₁ = {2 * norm}."
        raise HomoclinicConfigurationError(_err_msg)
    constant = CoverSeq(
        SeqWindow(0, [norm], SeqKind.INTEGER, Tail.periodic(1), Tail.periodic(1)), norm
    )

    contained = recovered = 0
    worst = 0.0
    for _ in range(trials):
        x = haar_point(data.poly, -window, window, rng)
        shift_bar = xi_star_bar(data, constant, (x.lo, x.hi))
        moved = SeqWindow(x.lo, x.coords.as_array() - shift_bar.as_array(), SeqKind.REAL)
        result = recover(data, XfPoint(rho(moved)))
        symbols = result.point.v.values + norm
        if symbols.min() >= 0 and symbols.max() <= alphabet_size - 1:
            contained += 1
        lo, hi = result.report.window
        rebuilt = zeta_bar(data, result.point, (lo, hi)).as_array()
        rebuilt = rebuilt + np.asarray(shift_bar.take(np.arange(lo, hi + 1)))
        error = float(torus_distance(rebuilt, x.coords.take(np.arange(lo, hi + 1))).max())
        worst = max(worst, error)
        recovered += error < tol
    return VLReport(alphabet_size, trials, contained, recovered, worst)

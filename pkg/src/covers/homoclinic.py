"""Fundamental homoclinic points of α_f and their closed forms."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Literal

import numpy as np
import sympy as sp

from covers.exceptions import (
    BranchError,
    HomoclinicConfigurationError,
    NumericalError,
    RepeatedRootError,
    WindowError,
)
from covers.laurent import (
    LaurentPoly,
    SeqKind,
    SeqWindow,
    Tail,
    TailKind,
    adjoint,
    canonicalize,
    torus_wrap,
)
from covers.spectra import (
    ROOT_TOL,
    RootTag,
    Spectrum,
    companion_matrix,
    compute_spectrum,
    is_squarefree,
)

if TYPE_CHECKING:  # pragma: no cover
    from numpy.typing import ArrayLike, NDArray

__all__: list[str] = [
    "HomoclinicData",
    "NoHomoclinicReport",
    "RationalHomoclinic",
    "Which",
    "build_homoclinic",
    "decays_two_sided",
    "exact_one_sided",
    "generate_homoclinic",
    "homoclinic_point_2d",
    "is_fundamental_2d",
    "lattice_vector_2d",
    "partial_fractions",
    "rho",
    "torus_distance",
    "verify_no_homoclinic",
]

logger = logging.getLogger(__name__)

Side = Literal["left", "right"]


class Which(enum.Enum):
    """Which of the fundamental homoclinic sequences to use."""

    PLUS = "plus"
    MINUS = "minus"
    CIRCLE = "circle"
    DELTA = "delta"


# Root groups and signs summed on n >= 1 and on n <= 0 (canonical indices).
_POSITIVE: dict[Which, tuple[tuple[RootTag, int], ...]] = {
    Which.PLUS: ((RootTag.MINUS, 1),),
    Which.DELTA: ((RootTag.MINUS, 1),),
    Which.MINUS: ((RootTag.MINUS, 1), (RootTag.CIRCLE, 1)),
    Which.CIRCLE: ((RootTag.CIRCLE, 1),),
}
_NEGATIVE: dict[Which, tuple[tuple[RootTag, int], ...]] = {
    Which.PLUS: ((RootTag.CIRCLE, -1), (RootTag.PLUS, -1)),
    Which.DELTA: ((RootTag.PLUS, -1),),
    Which.MINUS: ((RootTag.PLUS, -1),),
    Which.CIRCLE: ((RootTag.CIRCLE, 1),),
}


def torus_distance(values: ArrayLike, other: ArrayLike = 0.0) -> NDArray[np.float64]:
    """Elementwise distance on 𝕋 = ℝ/ℤ."""
    diff = np.mod(np.asarray(values, dtype=float) - np.asarray(other, dtype=float), 1.0)
    return np.minimum(diff, 1.0 - diff)


def rho(s: SeqWindow) -> SeqWindow:
    """Coordinatewise reduction mod 1."""
    if s.kind is SeqKind.RATIONAL:
        return replace(s, values=tuple(v % 1 for v in s.values))
    return SeqWindow(s.lo, torus_wrap(s.as_array()), SeqKind.TORUS, s.left, s.right)


def partial_fractions(f: LaurentPoly, spectrum: Spectrum) -> dict[complex, complex]:
    """Coefficients b_θ = 1 / Π_{θ'≠θ}(θ - θ') of 1/f over its roots."""
    if not is_squarefree(f):
        _err_msg = f"{f} has a repeated root."
        raise RepeatedRootError(_err_msg)
    roots = np.array(spectrum.roots, dtype=complex)
    coeffs = {
        complex(theta): complex(1.0 / np.prod(theta - np.delete(roots, i)))
        for i, theta in enumerate(roots)
    }

    # Σ_θ b_θ θ^j = δ_{j, m-1} for 0 <= j < m.
    m = len(roots)
    b = np.array(list(coeffs.values()))
    for j in range(m):
        terms = b * roots**j
        expected = 1.0 if j == m - 1 else 0.0
        scale = max(1.0, float(np.abs(terms).sum()))
        if abs(terms.sum() - expected) > 1e-6 * scale:
            _err_msg = f"Partial fractions of {f} fail the moment check at j={j}."
            raise NumericalError(_err_msg)
    return coeffs


@dataclass(frozen=True, eq=False)
class HomoclinicData:
    """Closed forms of w⁺, w⁻, w∘ (and w^Δ when expansive) for f.

    Indices follow f as given: for f = sign·u^L·g with g canonical and
    leading coefficient g_m, w_j = sign·(w_g)_{j-L}, where
    (w_g)_n = (1/g_m) Σ b_θ θ^{n-1} over the root groups of each side.
    """

    poly: LaurentPoly
    spectrum: Spectrum
    b: dict[complex, complex]
    window: int = 64

    @cached_property
    def _canonical(self) -> LaurentPoly:
        return canonicalize(self.poly)

    @property
    def scale(self) -> float:
        """sign / g_m."""
        return self._canonical.sign / self._canonical.leading

    @cached_property
    def _roots(self) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
        roots = np.array(self.spectrum.roots, dtype=complex)
        return roots, np.array([self.b[complex(r)] for r in roots], dtype=complex)

    def _amplitude(self, tag: RootTag) -> float:
        _, b = self._roots
        mask = np.array([t is tag for t in self.spectrum.tags], dtype=bool)
        return abs(self.scale) * float(np.abs(b[mask]).sum())

    @property
    def decay_rates(self) -> tuple[float | None, float | None]:
        """(λ⁻, λ⁺) = (max|Θ⁻|, min|Θ⁺|); None for an empty group."""
        minus = max((abs(r) for r in self.spectrum.minus), default=None)
        plus = min((abs(r) for r in self.spectrum.plus), default=None)
        return minus, plus

    def require_expansive(self, which: Which = Which.DELTA) -> None:
        """Raise BranchError when w^Δ is asked for on a nonexpansive f."""
        if which is Which.DELTA and not self.spectrum.expansive:
            _err_msg = f"{self.poly} is nonexpansive; w^Δ does not exist."
            raise BranchError(_err_msg)

    def evaluate(self, which: Which, indices: ArrayLike) -> NDArray[np.float64]:
        """Closed-form values of a homoclinic sequence at any indices."""
        self.require_expansive(which)
        n = np.asarray(indices, dtype=np.int64) - self.poly.low
        roots, b = self._roots
        out = np.zeros(n.shape, dtype=complex)
        positive = n >= 1
        for mask, table in ((positive, _POSITIVE[which]), (~positive, _NEGATIVE[which])):
            if not mask.any():
                continue
            exps = n[mask] - 1
            acc = np.zeros(exps.shape, dtype=complex)
            for theta, coeff, tag in zip(roots, b, self.spectrum.tags):
                for wanted, sign in table:
                    if tag is wanted:
                        acc += sign * coeff * theta**exps
            out[mask] = acc
        out *= self.scale

        if out.size and np.abs(out.imag).max() > 1e-8 * max(1.0, np.abs(out.real).max()):
            _err_msg = f"Homoclinic values for {self.poly} are not real."
            raise NumericalError(_err_msg)
        return out.real

    def tail_sum(self, which: Which, side: Side, start: int) -> float:
        """Σ|w_j| over j >= start (right) or j <= start (left).

        Returns inf when the sum diverges because of unit-circle terms.
        """
        self.require_expansive(which)
        shift = self.poly.low
        s = start - shift
        minus_rate, plus_rate = self.decay_rates
        has_circle = bool(self.spectrum.circle)
        if side == "right":
            tags = {tag for tag, _ in _POSITIVE[which]}
            if RootTag.CIRCLE in tags and has_circle:
                return math.inf
            explicit = 0.0
            if s < 1:
                explicit = float(np.abs(self.evaluate(which, np.arange(start, shift + 1))).sum())
            if RootTag.MINUS not in tags or minus_rate is None:
                return explicit
            amplitude = self._amplitude(RootTag.MINUS)
            return explicit + amplitude * minus_rate ** (max(s, 1) - 1) / (1 - minus_rate)

        tags = {tag for tag, _ in _NEGATIVE[which]}
        if RootTag.CIRCLE in tags and has_circle:
            return math.inf
        explicit = 0.0
        if s > 0:
            explicit = float(np.abs(self.evaluate(which, np.arange(shift + 1, start + 1))).sum())
        if RootTag.PLUS not in tags or plus_rate is None:
            return explicit
        mu = 1.0 / plus_rate
        amplitude = self._amplitude(RootTag.PLUS)
        return explicit + amplitude * mu ** (1 - min(s, 0)) / (1 - mu)

    def tail(self, which: Which, side: Side) -> Tail:
        tags = {tag for tag, _ in (_POSITIVE if side == "right" else _NEGATIVE)[which]}
        minus_rate, plus_rate = self.decay_rates
        shift = self.poly.low
        if RootTag.CIRCLE in tags and self.spectrum.circle:
            return Tail.unknown()
        if side == "right":
            if RootTag.MINUS not in tags or minus_rate is None:
                return Tail.zero()
            constant = self._amplitude(RootTag.MINUS) * minus_rate ** (-shift - 1)
            return Tail.decay(minus_rate, constant)
        if RootTag.PLUS not in tags or plus_rate is None:
            return Tail.zero()
        mu = 1.0 / plus_rate
        return Tail.decay(mu, self._amplitude(RootTag.PLUS) * mu ** (1 + shift))

    def sequence(self, which: Which, lo: int, hi: int) -> SeqWindow:
        """Materialize a homoclinic sequence on [lo, hi] with its tails."""
        values = self.evaluate(which, np.arange(lo, hi + 1))
        return SeqWindow(
            lo, values, SeqKind.REAL, self.tail(which, "left"), self.tail(which, "right")
        )

    @cached_property
    def w_plus(self) -> SeqWindow:
        """w⁺ on [-window, window]."""
        return self.sequence(Which.PLUS, -self.window, self.window)

    @cached_property
    def w_minus(self) -> SeqWindow:
        """w⁻ on [-window, window]."""
        return self.sequence(Which.MINUS, -self.window, self.window)

    @cached_property
    def w_circ(self) -> SeqWindow:
        """w∘ on [-window, window]."""
        return self.sequence(Which.CIRCLE, -self.window, self.window)

    @cached_property
    def w_delta(self) -> SeqWindow | None:
        """w^Δ on [-window, window], or None when f is nonexpansive."""
        if not self.spectrum.expansive:
            return None
        return self.sequence(Which.DELTA, -self.window, self.window)

    @property
    def x_delta(self) -> SeqWindow:
        """The fundamental homoclinic point ρ(w^Δ)."""
        if self.w_delta is None:
            _err_msg = f"{self.poly} is nonexpansive; x^Δ does not exist."
            raise BranchError(_err_msg)
        return rho(self.w_delta)

    @property
    def circle_coefficients(self) -> tuple[tuple[complex, ...], NDArray[np.complex128]]:
        """Roots of Θ∘ and c_θ with w∘_j = Σ c_θ θ^j."""
        roots, b = self._roots
        mask = np.array([t is RootTag.CIRCLE for t in self.spectrum.tags], dtype=bool)
        circle = roots[mask]
        coeffs = self.scale * b[mask] * circle ** (-1.0 - self.poly.low)
        return tuple(complex(r) for r in circle), coeffs


def build_homoclinic(
    f: LaurentPoly,
    spectrum: Spectrum | None = None,
    window: int = 64,
    *,
    tol: float = ROOT_TOL,
    tail_tol: float | None = None,
) -> HomoclinicData:
    """Homoclinic data for f, materialized on [-window, window].

    With `tail_tol`, decaying tails must fall below it at the window edges.
    """
    if window < 1:
        _err_msg = f"The window half-width must be positive, got {window}."
        raise HomoclinicConfigurationError(_err_msg)
    spectrum = compute_spectrum(f, tol) if spectrum is None else spectrum
    data = HomoclinicData(
        poly=f, spectrum=spectrum, b=partial_fractions(f, spectrum), window=window
    )
    if tail_tol is not None:
        for which in (Which.PLUS, Which.MINUS):
            for side in ("left", "right"):
                tail = data.tail(which, side)
                if tail.kind is TailKind.DECAY and tail.constant is not None and tail.rate:
                    edge = tail.constant * tail.rate**window
                    if edge > tail_tol:
                        _err_msg = f"The {side} tail of w_{which.value} is {edge:.3g} at the window edge."
                        raise WindowError(_err_msg)
    logger.debug("homoclinic data for %s on [-%d, %d]", f, window, window)
    return data


@dataclass(frozen=True, eq=False)
class RationalHomoclinic:
    """An exact one-sided homoclinic sequence."""

    side: Which
    values: SeqWindow


def exact_one_sided(
    f: LaurentPoly,
    n_max: int,
    spectrum: Spectrum | None = None,
    *,
    tol: float = ROOT_TOL,
) -> RationalHomoclinic:
    """Exact rational w⁻ (when Θ⁺ = ∅) or w⁺ (when Θ⁻ = ∅).

    Solves Σ_k f_k w_{n+k} = δ_{n,0} by recursion away from the zero tail.
    """
    if n_max < 0:
        _err_msg = f"n_max must be non-negative, got {n_max}."
        raise HomoclinicConfigurationError(_err_msg)
    spectrum = compute_spectrum(f, tol) if spectrum is None else spectrum
    a = [Fraction(c) for c in f.coeffs]
    m = f.span
    zero = Fraction(0)
    # Indices below are relative to u^low; the window is shifted back at the end.
    w: dict[int, Fraction] = {}
    if not spectrum.plus:
        for n in range(-m, n_max - m + 1):
            total = sum((a[k] * w.get(n + k, zero) for k in range(m)), zero)
            w[n + m] = ((1 if n == 0 else 0) - total) / a[m]
        values = [w[n] for n in range(n_max + 1)]
        window = SeqWindow(f.low, values, SeqKind.RATIONAL, Tail.zero(), Tail.unknown())
        return RationalHomoclinic(Which.MINUS, window)

    if not spectrum.minus:
        for n in range(0, -n_max - 1, -1):
            total = sum((a[k] * w.get(n + k, zero) for k in range(1, m + 1)), zero)
            w[n] = ((1 if n == 0 else 0) - total) / a[0]
        values = [w[n] for n in range(-n_max, 1)]
        window = SeqWindow(f.low - n_max, values, SeqKind.RATIONAL, Tail.unknown(), Tail.zero())
        return RationalHomoclinic(Which.PLUS, window)

    _err_msg = f"{f} has roots inside and outside the unit circle; no one-sided exact form."
    raise BranchError(_err_msg)


@dataclass(frozen=True)
class NoHomoclinicReport:
    """Outcome of the homoclinic negative control."""

    trials: int
    nondecaying: int
    min_tail: float
    max_tail: float

    @property
    def verdict(self) -> bool:
        """Whether every candidate failed to decay."""
        return self.nondecaying == self.trials


def _random_poly(rng: np.random.Generator) -> LaurentPoly:
    size = int(rng.integers(1, 5))
    positions = rng.choice(np.arange(-3, 4), size=size, replace=False)
    coeffs = rng.choice(np.array([-2, -1, 1, 2]), size=size)
    low = int(positions.min())
    dense = [0] * (int(positions.max()) - low + 1)
    for p, c in zip(positions, coeffs):
        dense[int(p) - low] = int(c)
    return LaurentPoly(tuple(dense), low)


def _kills_point(f: LaurentPoly, h: LaurentPoly) -> bool:
    """Whether f divides h*, so that h*(σ̄)w⁻ is an integer sequence."""
    quotient = canonicalize(adjoint(h)).to_sympy().to_field()
    return quotient.rem(canonicalize(f).to_sympy().to_field()).is_zero


def _convolve(data: HomoclinicData, which: Which, h: LaurentPoly, lo: int, hi: int) -> NDArray[np.float64]:
    """Σ_j h_j w_{n-j} on [lo, hi]."""
    idx = np.arange(lo, hi + 1)
    return sum((c * data.evaluate(which, idx - j) for j, c in h.items()), np.zeros(len(idx)))


def verify_no_homoclinic(
    data: HomoclinicData,
    trials: int = 100,
    window: int = 64,
    *,
    rng: np.random.Generator | None = None,
    tol: float = 0.01,
) -> NoHomoclinicReport:
    """Check that candidate points h*(σ̄)w⁻ fail to decay on both sides.

    The first candidate is w⁻ itself; the rest use random h with small
    support and coefficients.
    """
    if data.spectrum.expansive:
        _err_msg = "expansive: homoclinic group is nontrivial"
        raise BranchError(_err_msg)
    rng = np.random.default_rng(0) if rng is None else rng

    tails = []
    for trial in range(trials):
        h = LaurentPoly((1,))
        if trial:
            h = _random_poly(rng)
            while _kills_point(data.poly, h):
                h = _random_poly(rng)
        dist = torus_distance(_convolve(data, Which.MINUS, h, -window, window))
        edge = window // 2
        tails.append(max(dist[: window - edge + 1].max(), dist[window + edge :].max()))

    nondecaying = sum(t > tol for t in tails)
    logger.info("%d of %d candidates fail to decay", nondecaying, trials)
    return NoHomoclinicReport(trials, nondecaying, float(min(tails)), float(max(tails)))


def generate_homoclinic(data: HomoclinicData, h: LaurentPoly, window: int | None = None) -> SeqWindow:
    """The homoclinic point ρ(h*(σ̄)w^Δ) of an expansive α_f."""
    data.require_expansive()
    window = data.window if window is None else window
    values = _convolve(data, Which.DELTA, h, -window, window)
    return SeqWindow(-window, torus_wrap(values), SeqKind.TORUS, Tail.unknown(), Tail.unknown())


def decays_two_sided(s: SeqWindow, tol: float = 1e-6) -> bool:
    """Whether both outer quarters of a torus window are within tol of 0."""
    dist = torus_distance(s.as_array())
    quarter = max(1, len(dist) // 4)
    return bool(dist[:quarter].max() <= tol and dist[-quarter:].max() <= tol)


def _torus_companion(data: HomoclinicData) -> sp.Matrix:
    g = data.spectrum.poly
    if g.span != 2 or abs(g.trailing) != 1:
        _err_msg = f"{data.poly} does not define a hyperbolic automorphism of 𝕋²."
        raise HomoclinicConfigurationError(_err_msg)
    data.require_expansive()
    return sp.Matrix(companion_matrix(g).tolist())


def lattice_vector_2d(data: HomoclinicData) -> tuple[int, int]:
    """The lattice vector m with ρ(w^Δ_0, w^Δ_1) = w(m) on 𝕋²."""
    matrix = _torus_companion(data)
    vector = -(matrix.inv() * sp.Matrix([0, 1]))
    vector = canonicalize(data.poly).sign * matrix ** (-data.poly.low) * vector
    return int(vector[0]), int(vector[1])


def homoclinic_point_2d(f: LaurentPoly, m: tuple[int, int]) -> NDArray[np.float64]:
    """The point of E_u ∩ (E_s + m) reduced to 𝕋²."""
    spectrum = compute_spectrum(f)
    if len(spectrum.roots) != 2 or not spectrum.expansive:
        _err_msg = f"{f} does not define a hyperbolic automorphism of 𝕋²."
        raise HomoclinicConfigurationError(_err_msg)
    unstable = spectrum.plus[0].real
    stable = spectrum.minus[0].real
    system = np.array([[1.0, -1.0], [unstable, -stable]])
    a, _ = np.linalg.solve(system, np.array(m, dtype=float))
    return torus_wrap(a * np.array([1.0, unstable]))


def is_fundamental_2d(m: tuple[int, int]) -> bool:
    """Whether w(m) is fundamental, i.e. gcd(m) = 1."""
    return math.gcd(*m) == 1

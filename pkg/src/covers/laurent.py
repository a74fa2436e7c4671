"""Integer Laurent polynomials and the shift operators h(σ̄) on sequence windows."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from tokenize import TokenError
from typing import TYPE_CHECKING, Any

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from covers.exceptions import HomoclinicConfigurationError, WindowError

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Iterator

    from numpy.typing import ArrayLike, NDArray

__all__: list[str] = [
    "U",
    "Growth",
    "LaurentPoly",
    "SeqKind",
    "SeqWindow",
    "Tail",
    "TailKind",
    "adjoint",
    "apply_poly_shift",
    "canonicalize",
    "one_norm",
    "parse_poly",
    "torus_wrap",
]

logger = logging.getLogger(__name__)

U = sp.Symbol("u")

_TRANSFORMS = (
    *standard_transformations,
    implicit_multiplication_application,
    convert_xor,
)


@dataclass(frozen=True)
class LaurentPoly:
    """An integer Laurent polynomial Σ f_k u^k stored densely from u^low.

    Leading and trailing zeros are stripped on construction. `sign` records
    whether canonicalization flipped the sign of the polynomial it came
    from; it takes no part in equality.
    """

    coeffs: tuple[int, ...]
    low: int = 0
    sign: int = field(default=1, compare=False)

    def __post_init__(self) -> None:
        """Strip zero coefficients at both ends."""
        coeffs = tuple(int(c) for c in self.coeffs)
        start, end = 0, len(coeffs)
        while start < end and coeffs[start] == 0:
            start += 1
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        low = self.low + start if start < end else 0
        object.__setattr__(self, "coeffs", coeffs[start:end])
        object.__setattr__(self, "low", low)

    @property
    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self.coeffs

    @property
    def degree(self) -> int:
        """The top exponent."""
        return self.low + len(self.coeffs) - 1

    @property
    def span(self) -> int:
        """The number m = degree - low; the degree of the canonical form."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        """The coefficient of the top exponent."""
        return self.coeffs[-1]

    @property
    def trailing(self) -> int:
        """The coefficient of the bottom exponent."""
        return self.coeffs[0]

    def coefficient(self, k: int) -> int:
        """Return f_k."""
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def items(self) -> Iterator[tuple[int, int]]:
        """Yield (k, f_k) for the nonzero coefficients."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.low + i, c

    def evaluate(self, z: ArrayLike) -> Any:
        """Evaluate f at a scalar or an array of complex numbers."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        return np.polyval(self.coeffs[::-1], z) * z**self.low

    def to_sympy(self) -> sp.Poly:
        """Return u^-low·f as a sympy polynomial in u."""
        return sp.Poly(list(reversed(self.coeffs)) or [0], U)

    def __neg__(self) -> LaurentPoly:
        """Return -f."""
        return LaurentPoly(tuple(-c for c in self.coeffs), self.low)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        """Return f + g."""
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        low = min(self.low, other.low)
        high = max(self.degree, other.degree)
        coeffs = tuple(
            self.coefficient(k) + other.coefficient(k) for k in range(low, high + 1)
        )
        return LaurentPoly(coeffs, low)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        """Return f - g."""
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        """Return f·g."""
        if self.is_zero or other.is_zero:
            return LaurentPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(tuple(out), self.low + other.low)

    def __str__(self) -> str:
        """Render as a human string such as 5u^2-6u+5."""
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for k, c in sorted(self.items(), reverse=True):
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "u" if k == 1 else f"u^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if c < 0:
                parts.append(f"-{body}")
            else:
                parts.append(f"+{body}" if parts else body)
        return "".join(parts)


def parse_poly(text: str) -> LaurentPoly:
    """Parse "f0,f1,...,fm" or a human string such as "5u^2-6u+5"."""
    stripped = text.strip()
    if not stripped:
        _err_msg = "An empty string is not a polynomial."
        raise HomoclinicConfigurationError(_err_msg)

    if "," in stripped:
        try:
            coeffs = tuple(int(part) for part in stripped.split(","))
        except ValueError as exc:
            _err_msg = f"{text!r} is not a comma list of integer coefficients."
            raise HomoclinicConfigurationError(_err_msg) from exc
        return LaurentPoly(coeffs)

    try:
        expr = sp.expand(
            parse_expr(stripped, local_dict={"u": U}, transformations=_TRANSFORMS)
        )
    except (
        AttributeError,
        SyntaxError,
        TokenError,
        TypeError,
        ValueError,
        sp.SympifyError,
    ) as exc:
        _err_msg = f"Could not read {text!r} as a polynomial in u."
        raise HomoclinicConfigurationError(_err_msg) from exc

    if not isinstance(expr, sp.Expr) or expr.free_symbols - {U}:
        _err_msg = f"{text!r} must be a Laurent polynomial in the single variable u."
        raise HomoclinicConfigurationError(_err_msg)

    terms: dict[int, int] = {}
    for term in sp.Add.make_args(expr):
        coeff, exponent = term.as_coeff_exponent(U)
        if not (coeff.is_Integer and exponent.is_Integer):
            _err_msg = f"{text!r} has a non-integer term {term}."
            raise HomoclinicConfigurationError(_err_msg)
        terms[int(exponent)] = terms.get(int(exponent), 0) + int(coeff)

    low, high = min(terms), max(terms)
    return LaurentPoly(tuple(terms.get(k, 0) for k in range(low, high + 1)), low)


def canonicalize(f: LaurentPoly) -> LaurentPoly:
    """Shift f to low = 0 and make the leading coefficient positive.

    The returned polynomial's `sign` is -1 when the sign was flipped, so
    that f = sign·u^low·canonicalize(f).
    """
    if f.is_zero:
        _err_msg = "The zero polynomial has no canonical form."
        raise HomoclinicConfigurationError(_err_msg)
    sign = -1 if f.leading < 0 else 1
    return LaurentPoly(tuple(sign * c for c in f.coeffs), 0, sign)


def adjoint(f: LaurentPoly) -> LaurentPoly:
    """Return f*(u) = f(u^-1)."""
    if f.is_zero:
        _err_msg = "The zero polynomial has no adjoint."
        raise HomoclinicConfigurationError(_err_msg)
    return LaurentPoly(tuple(reversed(f.coeffs)), -f.degree, f.sign)


def one_norm(f: LaurentPoly) -> int:
    """Return ‖f‖₁ = Σ|f_k|."""
    return sum(abs(c) for c in f.coeffs)


def torus_wrap(values: ArrayLike) -> NDArray[np.float64]:
    """Reduce real numbers into [0, 1)."""
    wrapped = np.mod(np.asarray(values, dtype=float), 1.0)
    wrapped[wrapped >= 1.0] = 0.0
    return wrapped


class SeqKind(enum.Enum):
    """Value type of a sequence window."""

    REAL = "real"
    RATIONAL = "rational"
    INTEGER = "integer"
    TORUS = "torus"


class TailKind(enum.Enum):
    """What is known about a sequence beyond its window."""

    ZERO = "zero"
    DECAY = "decay"
    PERIODIC = "periodic"
    UNKNOWN = "unknown"


class Growth(enum.Enum):
    """Growth class of a sequence: bounded, or at most linear (ℓ*)."""

    BOUNDED = "bounded"
    LINEAR = "linear"


@dataclass(frozen=True)
class Tail:
    """One side's tail descriptor.

    A decay tail promises |s_n| <= constant·rate^|n| on its side.
    A periodic tail means the whole sequence repeats with `period`.
    """

    kind: TailKind = TailKind.UNKNOWN
    rate: float | None = None
    constant: float | None = None
    period: int | None = None
    growth: Growth = Growth.BOUNDED

    @classmethod
    def zero(cls) -> Tail:
        """Zero beyond the window."""
        return cls(TailKind.ZERO)

    @classmethod
    def decay(cls, rate: float, constant: float) -> Tail:
        """Exponential decay at `rate` with the given constant."""
        return cls(TailKind.DECAY, rate=rate, constant=constant)

    @classmethod
    def periodic(cls, period: int) -> Tail:
        """Periodic continuation."""
        return cls(TailKind.PERIODIC, period=period)

    @classmethod
    def unknown(cls, growth: Growth = Growth.BOUNDED) -> Tail:
        """Nothing known beyond a growth class."""
        return cls(TailKind.UNKNOWN, growth=growth)

    @property
    def exact(self) -> bool:
        """Whether values beyond the window can be produced exactly."""
        return self.kind in (TailKind.ZERO, TailKind.PERIODIC)


@dataclass(frozen=True, eq=False)
class SeqWindow:
    """A doubly-infinite sequence materialized on [lo, hi].

    Real, integer and torus windows hold read-only numpy arrays; rational
    windows hold a tuple of Fractions.
    """

    lo: int
    values: Any
    kind: SeqKind = SeqKind.REAL
    left: Tail = field(default_factory=Tail)
    right: Tail = field(default_factory=Tail)

    def __post_init__(self) -> None:
        """Normalize the storage and check the window invariants."""
        if self.kind is SeqKind.RATIONAL:
            values: Any = tuple(Fraction(v) for v in self.values)
        else:
            dtype = np.int64 if self.kind is SeqKind.INTEGER else np.float64
            values = np.array(self.values, dtype=dtype).reshape(-1)
            values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if not len(values):
            _err_msg = f"Empty window starting at {self.lo}."
            raise WindowError(_err_msg)
        if self.kind is SeqKind.TORUS and ((values < 0).any() or (values >= 1).any()):
            _err_msg = "Torus values must lie in [0, 1)."
            raise HomoclinicConfigurationError(_err_msg)
        periodic = (self.left.kind is TailKind.PERIODIC) or (
            self.right.kind is TailKind.PERIODIC
        )
        if periodic and (
            self.left != self.right
            or self.left.period is None
            or not 0 < self.left.period <= len(values)
        ):
            _err_msg = "A periodic window needs the same period on both sides."
            raise HomoclinicConfigurationError(_err_msg)

    @classmethod
    def delta(
        cls,
        index: int = 0,
        lo: int | None = None,
        hi: int | None = None,
        kind: SeqKind = SeqKind.INTEGER,
    ) -> SeqWindow:
        """The sequence δ_index with zero tails."""
        lo = index if lo is None else lo
        hi = index if hi is None else hi
        values = [1 if n == index else 0 for n in range(lo, hi + 1)]
        return cls(lo, values, kind, Tail.zero(), Tail.zero())

    @classmethod
    def zeros(cls, lo: int, hi: int, kind: SeqKind = SeqKind.REAL) -> SeqWindow:
        """The zero sequence."""
        return cls(lo, [0] * (hi - lo + 1), kind, Tail.zero(), Tail.zero())

    @property
    def hi(self) -> int:
        """Last index of the window."""
        return self.lo + len(self.values) - 1

    @property
    def period(self) -> int | None:
        """The period when both tails are periodic."""
        return self.left.period if self.left.kind is TailKind.PERIODIC else None

    def __len__(self) -> int:
        """Number of materialized values."""
        return len(self.values)

    def indices(self) -> NDArray[np.int64]:
        """The window's indices."""
        return np.arange(self.lo, self.hi + 1)

    def _fill(self, n: int) -> Any:
        """Value at an index outside the window, from the tail descriptor."""
        tail = self.left if n < self.lo else self.right
        if tail.kind is TailKind.ZERO:
            return Fraction(0) if self.kind is SeqKind.RATIONAL else 0
        if tail.kind is TailKind.PERIODIC and tail.period is not None:
            return self.values[(n - self.lo) % tail.period]
        _err_msg = (
            f"Index {n} is outside [{self.lo}, {self.hi}] and the "
            f"{tail.kind.value} tail does not determine it."
        )
        raise WindowError(_err_msg)

    def at(self, n: int) -> Any:
        """Return s_n, using the tails outside the window."""
        if self.lo <= n <= self.hi:
            return self.values[n - self.lo]
        return self._fill(n)

    def take(self, indices: ArrayLike) -> Any:
        """Return s at an array of indices (list of Fractions when rational)."""
        idx = np.asarray(indices, dtype=np.int64)
        if self.kind is SeqKind.RATIONAL:
            return [self.at(int(n)) for n in idx.reshape(-1)]
        inside = (idx >= self.lo) & (idx <= self.hi)
        if inside.all():
            return self.values[idx - self.lo]
        out = np.zeros(idx.shape, dtype=self.values.dtype)
        out[inside] = self.values[idx[inside] - self.lo]
        for pos in zip(*np.nonzero(~inside)):
            out[pos] = self._fill(int(idx[pos]))
        return out

    def extended(self, lo: int, hi: int) -> SeqWindow:
        """The same sequence materialized on [lo, hi]; tails must allow it."""
        return replace(self, lo=lo, values=self.take(np.arange(lo, hi + 1)))

    def restrict(self, lo: int, hi: int) -> SeqWindow:
        """The sub-window [lo, hi]; the new tails are unknown unless periodic."""
        if lo < self.lo or hi > self.hi or hi < lo:
            _err_msg = f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]."
            raise WindowError(_err_msg)
        values = self.values[lo - self.lo : hi - self.lo + 1]
        if self.period is not None:
            return self.extended(lo, hi)
        left = Tail.unknown(self.left.growth)
        right = Tail.unknown(self.right.growth)
        return SeqWindow(lo, values, self.kind, left, right)

    def shift(self, k: int = 1) -> SeqWindow:
        """Return σ̄^k s, that is n ↦ s_{n+k}."""
        return replace(self, lo=self.lo - k)

    def as_array(self) -> NDArray[np.float64]:
        """The values as floats."""
        return np.array([float(v) for v in self.values], dtype=float)

    def sup_norm(self) -> float:
        """max |s_n| over the window."""
        return float(np.max(np.abs(self.as_array())))

    def _combine(self, other: SeqWindow, sign: int) -> SeqWindow:
        both_zero = all(
            t.kind is TailKind.ZERO for t in (self.left, self.right, other.left, other.right)
        )
        if both_zero:
            lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        else:
            lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if hi < lo:
            _err_msg = "The two windows do not overlap."
            raise WindowError(_err_msg)
        idx = np.arange(lo, hi + 1)
        if SeqKind.RATIONAL in (self.kind, other.kind) and self.kind is other.kind:
            values: Any = [
                a + sign * b for a, b in zip(self.take(idx), other.take(idx))
            ]
        else:
            values = np.asarray(self.take(idx), dtype=float) + sign * np.asarray(
                other.take(idx), dtype=float
            )
        kind = self.kind if self.kind is other.kind else SeqKind.REAL
        if kind is SeqKind.TORUS:
            values = torus_wrap(values)
        tail = Tail.zero() if both_zero else Tail()
        return SeqWindow(lo, values, kind, tail, tail)

    def __add__(self, other: SeqWindow) -> SeqWindow:
        """Pointwise sum on the common window, or on the union when both have zero tails."""
        return self._combine(other, 1)

    def __sub__(self, other: SeqWindow) -> SeqWindow:
        """Pointwise difference, on the same window as `+`."""
        return self._combine(other, -1)


def _shifted_tail(tail: Tail, h: LaurentPoly) -> Tail:
    if tail.kind is not TailKind.DECAY or tail.rate is None or tail.constant is None:
        return tail
    reach = max(abs(h.low), abs(h.degree))
    constant = tail.constant * one_norm(h) * tail.rate ** (-reach)
    return Tail.decay(tail.rate, constant)


def apply_poly_shift(h: LaurentPoly, s: SeqWindow) -> SeqWindow:
    """Return h(σ̄)s, (h(σ̄)s)_n = Σ_k h_k s_{n+k}.

    The output window shrinks by the reach of h on each side, except on
    sides whose tail is zero, where it grows to hold every nonzero value.
    Periodic inputs give periodic outputs over one period.
    """
    if h.is_zero:
        _err_msg = "The zero polynomial does not act on sequences."
        raise HomoclinicConfigurationError(_err_msg)

    if s.period is not None:
        olo, ohi = s.lo, s.lo + s.period - 1
        left = right = s.left
    else:
        elo = s.lo - h.span if s.left.kind is TailKind.ZERO else s.lo
        ehi = s.hi + h.span if s.right.kind is TailKind.ZERO else s.hi
        olo, ohi = elo - h.low, ehi - h.degree
        left, right = _shifted_tail(s.left, h), _shifted_tail(s.right, h)
    if ohi < olo:
        _err_msg = f"The window [{s.lo}, {s.hi}] is too short to apply {h}."
        raise WindowError(_err_msg)

    idx = np.arange(olo, ohi + 1)
    if s.kind is SeqKind.RATIONAL:
        values: Any = [Fraction(0)] * len(idx)
        for k, c in h.items():
            values = [acc + c * v for acc, v in zip(values, s.take(idx + k))]
    else:
        values = sum(c * s.take(idx + k) for k, c in h.items())
        if s.kind is SeqKind.TORUS:
            values = torus_wrap(values)
    logger.debug("applied %s on [%d, %d] -> [%d, %d]", h, s.lo, s.hi, olo, ohi)
    return SeqWindow(olo, values, s.kind, left, right)

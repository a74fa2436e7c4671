"""Roots, unit-circle split, entropy and periodic-point counts of α_f."""

from __future__ import annotations

import enum
import functools
import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import sympy as sp
from scipy import integrate

from covers.exceptions import (
    AmbiguousRootError,
    CyclotomicError,
    HomoclinicConfigurationError,
    NumericalError,
    RootFindingError,
)
from covers.laurent import LaurentPoly, U, adjoint, canonicalize, one_norm

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Sequence

    from numpy.typing import NDArray

__all__: list[str] = [
    "ROOT_TOL",
    "Flags",
    "GrowthReport",
    "GrowthRow",
    "RootTag",
    "Spectrum",
    "classify",
    "companion_matrix",
    "compute_spectrum",
    "entropy_mahler",
    "entropy_roots",
    "find_roots",
    "is_cyclotomic",
    "is_squarefree",
    "periodic_count",
    "periodic_count_matrix",
    "periodic_growth",
    "pisot_root",
    "unit_circle_split",
]

logger = logging.getLogger(__name__)

ROOT_TOL: float = 1e-9
_MAX_ITER: int = 500


class RootTag(enum.Enum):
    """Where a root sits relative to the unit circle."""

    MINUS = "minus"
    CIRCLE = "circle"
    PLUS = "plus"


@dataclass(frozen=True)
class Flags:
    """Qualitative classification of f."""

    expansive: bool
    cyclotomic: bool
    pisot: bool
    salem: bool
    totally_irreducible_checked: bool | None = None

    def describe(self) -> str:
        """Short human description, e.g. "hyperbolic, Pisot"."""
        words = ["hyperbolic" if self.expansive else "nonhyperbolic"]
        if self.cyclotomic:
            words.append("cyclotomic")
        if self.pisot:
            words.append("Pisot")
        if self.salem:
            words.append("Salem")
        return ", ".join(words)


@dataclass(frozen=True)
class Spectrum:
    """Roots of the canonical form of f with their circle tags."""

    poly: LaurentPoly
    roots: tuple[complex, ...]
    tags: tuple[RootTag, ...]
    flags: Flags
    entropy_roots: float
    entropy_integral: float
    tol: float = ROOT_TOL

    def _tagged(self, tag: RootTag) -> tuple[complex, ...]:
        return tuple(r for r, t in zip(self.roots, self.tags) if t is tag)

    @property
    def minus(self) -> tuple[complex, ...]:
        """Θ⁻, the roots inside the unit circle."""
        return self._tagged(RootTag.MINUS)

    @property
    def circle(self) -> tuple[complex, ...]:
        """Θ∘, the roots on the unit circle."""
        return self._tagged(RootTag.CIRCLE)

    @property
    def plus(self) -> tuple[complex, ...]:
        """Θ⁺, the roots outside the unit circle."""
        return self._tagged(RootTag.PLUS)

    @property
    def expansive(self) -> bool:
        """Whether Θ∘ is empty."""
        return self.flags.expansive


def _pair_conjugates(roots: NDArray[np.complex128], tol: float) -> tuple[complex, ...]:
    """Snap near-real roots to the real line and make pairs exact conjugates."""
    scale = np.maximum(1.0, np.abs(roots))
    real = [complex(r.real, 0.0) for r, s in zip(roots, scale) if abs(r.imag) <= tol * s]
    upper = [complex(r) for r, s in zip(roots, scale) if r.imag > tol * s]
    lower = [complex(r) for r, s in zip(roots, scale) if r.imag < -tol * s]
    if len(upper) != len(lower):
        logger.warning("roots are not closed under conjugation: %s", roots)
        ordered = [complex(r) for r in roots]
    else:
        ordered = real
        for r in upper:
            partner = min(lower, key=lambda s, r=r: abs(s - r.conjugate()))
            lower.remove(partner)
            mid = (r + partner.conjugate()) / 2
            ordered.extend((mid, mid.conjugate()))
    return tuple(sorted(ordered, key=lambda z: (round(abs(z), 12), math.atan2(z.imag, z.real))))


def find_roots(f: LaurentPoly, tol: float = ROOT_TOL) -> tuple[complex, ...]:
    """All roots of the canonical form of f by Aberth iteration.

    Every root is checked against |f(θ)| <= tol·‖f‖₁·max(1, |θ|)^m.
    """
    g = canonicalize(f)
    m = g.span
    if m < 1:
        _err_msg = f"{f} is constant; α_f needs degree at least 1."
        raise HomoclinicConfigurationError(_err_msg)

    coeffs = np.array(g.coeffs[::-1], dtype=float)
    deriv = np.polyder(coeffs)
    if m == 1:
        z = np.array([-coeffs[1] / coeffs[0]], dtype=complex)
    else:
        radius = 1.0 + float(np.max(np.abs(coeffs[1:] / coeffs[0])))
        angles = 2 * np.pi * np.arange(m) / m + 0.4
        z = radius * np.exp(1j * angles)
        for _ in range(_MAX_ITER):
            pv = np.polyval(coeffs, z)
            dpv = np.polyval(deriv, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            denom = dpv - pv * inv.sum(axis=1)
            denom[denom == 0] = 1e-300
            delta = pv / denom
            z = z - delta
            if np.max(np.abs(delta)) <= 1e-15 * max(1.0, float(np.max(np.abs(z)))):
                break
        # Newton polish on simple roots.
        for _ in range(3):
            dpv = np.polyval(deriv, z)
            ok = np.abs(dpv) > 1e-8
            z[ok] = z[ok] - np.polyval(coeffs, z[ok]) / dpv[ok]

    residuals = np.abs(np.polyval(coeffs, z))
    allowed = tol * one_norm(g) * np.maximum(1.0, np.abs(z)) ** m
    if (residuals > allowed).any():
        _err_msg = f"Root finding for {g} did not converge."
        raise RootFindingError(_err_msg, residuals=[float(r) for r in residuals])
    return _pair_conjugates(z, tol)


def _circle_factor(g: LaurentPoly) -> sp.Poly:
    return sp.gcd(g.to_sympy(), canonicalize(adjoint(g)).to_sympy())


def unit_circle_split(
    f: LaurentPoly, roots: Sequence[complex], tol: float = ROOT_TOL
) -> tuple[RootTag, ...]:
    """Tag each root as inside, on, or outside the unit circle.

    A root is on the circle only when it is a root of gcd(f, f*) and
    ||θ| - 1| < tol. Roots that sit close to the circle without that
    certificate raise AmbiguousRootError.
    """
    common = _circle_factor(canonicalize(f))
    common_coeffs = [float(c) for c in common.all_coeffs()]
    common_norm = sum(abs(c) for c in common_coeffs)
    loose = math.sqrt(tol)

    tags: list[RootTag] = []
    for theta in roots:
        off = abs(theta) - 1.0
        scale = max(1.0, abs(theta)) ** common.degree()
        on_common = common.degree() > 0 and (
            abs(np.polyval(common_coeffs, theta)) <= loose * common_norm * scale
        )
        if abs(off) < tol:
            if not on_common:
                _err_msg = f"Root {theta} is within {tol} of the unit circle but is not a root of gcd(f, f*)."
                raise AmbiguousRootError(_err_msg)
            tags.append(RootTag.CIRCLE)
        elif on_common and abs(off) < loose:
            _err_msg = f"Root {theta} of gcd(f, f*) is {abs(off):.3g} away from the unit circle."
            raise AmbiguousRootError(_err_msg)
        else:
            tags.append(RootTag.PLUS if off > 0 else RootTag.MINUS)
    return tuple(tags)


@functools.lru_cache(maxsize=128)
def is_cyclotomic(f: LaurentPoly) -> bool:
    """Whether f shares a root with some u^k - 1."""
    g = canonicalize(f).to_sympy()
    m = g.degree()
    for k in range(1, 2 * m * m + 3):
        if sp.totient(k) > m:
            continue
        if sp.gcd(g, sp.Poly(U**k - 1, U)).degree() > 0:
            return True
    return False


def is_squarefree(f: LaurentPoly) -> bool:
    """Whether f has no repeated roots."""
    g = canonicalize(f).to_sympy()
    return sp.gcd(g, g.diff(U)).degree() == 0


def classify(
    f: LaurentPoly,
    roots: Sequence[complex] | None = None,
    tags: Sequence[RootTag] | None = None,
    tol: float = ROOT_TOL,
) -> Flags:
    """Flags for f, from its roots and tags when already known."""
    g = canonicalize(f)
    roots = find_roots(g, tol) if roots is None else roots
    tags = unit_circle_split(g, roots, tol) if tags is None else tags

    plus = [r for r, t in zip(roots, tags) if t is RootTag.PLUS]
    has_circle = RootTag.CIRCLE in tags
    monic = g.leading == 1
    single_real_plus = len(plus) == 1 and abs(plus[0].imag) <= tol and plus[0].real > 1
    self_reciprocal = canonicalize(adjoint(g)).coeffs == g.coeffs
    return Flags(
        expansive=not has_circle,
        cyclotomic=has_circle and is_cyclotomic(g),
        pisot=monic and single_real_plus and not has_circle,
        salem=monic and single_real_plus and has_circle and self_reciprocal,
    )


def entropy_roots(f: LaurentPoly, roots: Sequence[complex] | None = None) -> float:
    """h(α_f) = log|f_m| + Σ_{|θ|>1} log|θ|."""
    g = canonicalize(f)
    roots = find_roots(g) if roots is None else roots
    outside = sum(math.log(abs(r)) for r in roots if abs(r) > 1.0 + ROOT_TOL)
    return math.log(g.leading) + outside


def entropy_mahler(
    f: LaurentPoly,
    quad_points: int = 200,
    roots: Sequence[complex] | None = None,
) -> float:
    """∫₀¹ log|f(e^{2πit})| dt by adaptive quadrature.

    The interval is split at the arguments of roots near the unit circle
    so that the logarithmic singularities sit at subinterval endpoints.
    """
    g = canonicalize(f)
    coeffs = np.array(g.coeffs[::-1], dtype=float)
    roots = find_roots(g) if roots is None else roots
    cuts = {0.0, 1.0}
    cuts.update(
        (math.atan2(r.imag, r.real) / (2 * math.pi)) % 1.0
        for r in roots
        if abs(abs(r) - 1.0) < 1e-6
    )

    def integrand(t: float) -> float:
        return math.log(abs(np.polyval(coeffs, np.exp(2j * math.pi * t))))

    total = 0.0
    for a, b in itertools.pairwise(sorted(cuts)):
        if b - a <= 0:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, error = integrate.quad(
                integrand, a, b, limit=quad_points, epsabs=1e-13, epsrel=1e-12
            )
        if error > 1e-7:
            _err_msg = f"Quadrature on [{a:.6f}, {b:.6f}] has error estimate {error:.3g}."
            raise NumericalError(_err_msg)
        total += value
    return total


def compute_spectrum(
    f: LaurentPoly, tol: float = ROOT_TOL, quad_points: int = 200
) -> Spectrum:
    """Roots, tags, flags and both entropy values for f."""
    g = canonicalize(f)
    if g.span < 1:
        _err_msg = f"{f} is constant; α_f needs degree at least 1."
        raise HomoclinicConfigurationError(_err_msg)
    _, factors = sp.factor_list(g.to_sympy())
    if len(factors) > 1 or any(power > 1 for _, power in factors):
        logger.warning("%s is reducible over the integers; results assume an irreducible f", g)

    roots = find_roots(g, tol)
    tags = unit_circle_split(g, roots, tol)
    flags = classify(g, roots, tags, tol)
    spectrum = Spectrum(
        poly=g,
        roots=roots,
        tags=tags,
        flags=flags,
        entropy_roots=entropy_roots(g, roots),
        entropy_integral=entropy_mahler(g, quad_points, roots),
        tol=tol,
    )
    logger.info("%s: %s, entropy %.12f", g, flags.describe(), spectrum.entropy_roots)
    return spectrum


def companion_matrix(f: LaurentPoly) -> NDArray[np.int64]:
    """Companion matrix of a monic canonical f; last row is -f_0..-f_{m-1}."""
    g = canonicalize(f)
    if g.leading != 1:
        _err_msg = f"{g} is not monic; its companion matrix is not integral."
        raise HomoclinicConfigurationError(_err_msg)
    m = g.span
    matrix = np.zeros((m, m), dtype=np.int64)
    matrix[np.arange(m - 1), np.arange(1, m)] = 1
    matrix[m - 1] = [-c for c in g.coeffs[:-1]]
    return matrix


def periodic_count(f: LaurentPoly, k: int) -> int:
    """|Fix(α_f^k)| = |Res(f, u^k - 1)|."""
    if k < 1:
        _err_msg = f"The period must be positive, got {k}."
        raise HomoclinicConfigurationError(_err_msg)
    g = canonicalize(f)
    if is_cyclotomic(g):
        _err_msg = f"{g} is cyclotomic; α_f^k has infinitely many fixed points."
        raise CyclotomicError(_err_msg)
    count = abs(int(g.to_sympy().resultant(sp.Poly(U**k - 1, U))))
    if count == 0:
        _err_msg = f"{g} and u^{k}-1 share a root."
        raise CyclotomicError(_err_msg)
    return count


def periodic_count_matrix(f: LaurentPoly, k: int) -> int:
    """|det(M^k - I)| for the companion matrix M; needs |f_0| = f_m = 1."""
    g = canonicalize(f)
    if abs(g.trailing) != 1:
        _err_msg = f"{g} is not unimodular; X_f is not the torus 𝕋^{g.span}."
        raise HomoclinicConfigurationError(_err_msg)
    matrix = sp.Matrix(companion_matrix(g).tolist())
    return abs(int((matrix**k - sp.eye(g.span)).det()))


@dataclass(frozen=True)
class GrowthRow:
    """Periodic-point count at one period."""

    k: int
    count: int
    rate: float


@dataclass(frozen=True)
class GrowthReport:
    """Growth of periodic-point counts against the entropy."""

    rows: tuple[GrowthRow, ...]
    entropy: float

    @property
    def gap(self) -> float | None:
        """|log(count)/k - h| at the largest k, or None without rows."""
        if not self.rows:
            return None
        return abs(self.rows[-1].rate - self.entropy)


def periodic_growth(f: LaurentPoly, k_max: int) -> GrowthReport:
    """Counts and (1/k) log counts for k = 1..k_max."""
    rows = []
    for k in range(1, k_max + 1):
        count = periodic_count(f, k)
        rows.append(GrowthRow(k, count, math.log(count) / k))
    return GrowthReport(tuple(rows), entropy_roots(f))


def pisot_root(spectrum: Spectrum) -> float:
    """The Pisot number β of a Pisot f, its only root outside the circle."""
    if not spectrum.flags.pisot:
        _err_msg = f"{spectrum.poly} is not a Pisot polynomial."
        raise HomoclinicConfigurationError(_err_msg)
    return spectrum.plus[0].real

"""Tests related to the symbolic cover of expansive α_f."""
import math
from fractions import Fraction

import numpy as np
import pytest

from covers.exceptions import (
    BranchError,
    HomoclinicConfigurationError,
    InvalidPointError,
)
from covers.homoclinic import Which, build_homoclinic, torus_distance
from covers.laurent import SeqKind, SeqWindow, apply_poly_shift, one_norm, parse_poly
from covers.spectra import pisot_root
from covers.symcover import (
    CoverSeq,
    XfPoint,
    alphabet_entropy,
    beta_admissible,
    beta_encode,
    beta_injectivity,
    block_point,
    check_alphabet_entropy,
    decode,
    fixed_point_windows,
    haar_coordinates,
    haar_point,
    interior_window,
    is_golden_mean_admissible,
    kappa_lift,
    parry_expansion,
    second_code,
    specification_gap,
    specification_shadow,
    wstar_reduce,
    xi,
    xi_bar,
)


class TestXfPoint:
    """Tests related to `XfPoint`."""

    def test_needs_torus(self):
        """Points carry torus coordinates."""
        with pytest.raises(InvalidPointError):
            XfPoint(SeqWindow(0, [0.5, 0.5]))

    def test_from_torus(self):
        """x_0, x_1 fix a point of the cat map."""
        x = XfPoint.from_torus(parse_poly("u^2-3u+1"), [0.25, 0.5], -3, 3)
        np.testing.assert_allclose(x.coords.take([0, 1, 2]), [0.25, 0.5, 0.25])
        assert x.residual(parse_poly("u^2-3u+1")) < 1e-12

    def test_from_torus_rejects(self):
        """Non-unimodular f or the wrong number of coordinates are errors."""
        with pytest.raises(HomoclinicConfigurationError):
            XfPoint.from_torus(parse_poly("3-2u"), [0.5], 0, 3)
        with pytest.raises(HomoclinicConfigurationError):
            XfPoint.from_torus(parse_poly("u^2-3u+1"), [0.5], 0, 3)

    @pytest.mark.poly("u^2-3u+1")
    def test_shift(self, haar):
        """α_f moves coordinates one step left."""
        x = haar(-5, 5)
        assert x.shift(1).coords.at(0) == x.coords.at(1)
        assert x.shift(1).distance(x.shift(1)) == 0.0

    @pytest.mark.parametrize("text", ["u^2-3u+1", "3-2u", "5u^2-6u+5", "u^4-u^3-u^2-u+1"])
    def test_haar_points(self, text, rng):
        """Haar samples satisfy f(σ̄)x = 0 on 𝕋."""
        f = parse_poly(text)
        x = haar_point(f, -20, 20, rng)
        assert (x.lo, x.hi) == (-20, 20)
        assert x.residual(f) < 1e-9

    def test_haar_coordinates(self, rng):
        """Vectorized samples are points of X_f."""
        f = parse_poly("u^4-u^3-u^2-u+1")
        coords = haar_coordinates(f, -8, 8, 50, rng)
        assert coords.shape == (50, 17)
        image = sum(c * coords[:, k : k + 13] for k, c in enumerate(f.coeffs))
        assert torus_distance(image).max() < 1e-9


class TestCoverSeq:
    """Tests related to `CoverSeq`."""

    def test_finite(self, cover):
        """The default alphabet bound is the largest symbol."""
        v = cover([1, -2, 0], -1)
        assert v.alphabet_bound == 2
        assert v.v.at(10) == 0
        assert v.shift(1).v.lo == -2

    def test_bound(self, cover):
        """Symbols must fit the alphabet."""
        with pytest.raises(HomoclinicConfigurationError):
            cover([3], 0, 2)

    def test_integer(self):
        """Cover sequences are integer valued."""
        with pytest.raises(HomoclinicConfigurationError):
            CoverSeq(SeqWindow(0, [0.5]), 1)


@pytest.mark.poly("u^2-3u+1")
class TestDecode:
    """Tests related to `decode` and `xi`."""

    def test_round_trip(self, poly, hdata, haar):
        """ξ(decode(x)) = x on the certified interior."""
        for _ in range(10):
            x = haar()
            v = decode(poly, x, spectrum=hdata.spectrum)
            assert (v.v.lo, v.v.hi) == (-64, 62)
            assert v.v.sup_norm() <= one_norm(poly)
            lo, hi = interior_window(hdata, v.v, sup=float(v.alphabet_bound))
            assert lo < 0 < hi
            assert x.distance(xi(hdata, v, (lo, hi)), lo, hi) < 1e-8

    def test_invalid_point(self, poly, hdata, rng):
        """Random torus values are not a point of X_f."""
        x = XfPoint(SeqWindow(0, rng.random(20), SeqKind.TORUS))
        with pytest.raises(InvalidPointError):
            decode(poly, x, spectrum=hdata.spectrum)

    def test_delta(self, hdata, cover):
        """ξ̄(δ_0) = w^Δ."""
        out = xi_bar(hdata, cover([1]), (-10, 10))
        np.testing.assert_allclose(
            out.values, hdata.evaluate(Which.DELTA, np.arange(-10, 11)), atol=1e-12
        )

    def test_inverse(self, poly, hdata, cover):
        """f(σ̄)ξ̄(v) = v."""
        v = cover([1, 0, -2, 1, 1], -2)
        image = apply_poly_shift(poly, xi_bar(hdata, v, (-30, 30)))
        expected = np.asarray(v.v.take(image.indices()), dtype=float)
        np.testing.assert_allclose(image.as_array(), expected, atol=1e-9)

    def test_equivariance(self, hdata, cover):
        """ξ̄(σ̄v) = σ̄ξ̄(v)."""
        v = cover([1, 2, -1])
        shifted = xi_bar(hdata, v.shift(2), (-12, 8))
        plain = xi_bar(hdata, v, (-10, 10))
        np.testing.assert_allclose(shifted.values, plain.values, atol=1e-12)


@pytest.mark.poly("5u^2-6u+5")
def test_decode_nonexpansive(poly, spectrum, haar):
    """The symbolic cover needs an expansive f."""
    with pytest.raises(BranchError):
        decode(poly, haar(), spectrum=spectrum)


@pytest.mark.poly("u^2-3u+1")
class TestSpecification:
    """Tests related to `specification_gap` and `specification_shadow`."""

    def test_gap(self, poly, hdata):
        """N(ε) = 2r + m and grows as ε shrinks."""
        gap, margin = specification_gap(hdata, 1e-3)
        assert gap == 2 * margin + poly.span
        assert specification_gap(hdata, 1e-6)[0] > gap
        with pytest.raises(HomoclinicConfigurationError):
            specification_gap(hdata, 0)

    def test_shadow(self, poly, hdata, rng):
        """Two blocks N(ε) apart are ε-shadowed, also periodically."""
        eps = 1e-3
        gap, margin = specification_gap(hdata, eps)
        spans = [(0, 5), (5 + gap, 10 + gap)]
        blocks = [(s, block_point(poly, rng.random(2).tolist(), *s, margin)) for s in spans]
        result = specification_shadow(hdata, blocks, eps)
        assert max(result.errors) < eps
        assert result.point.residual(poly) < 1e-9
        period = gap + spans[-1][1] + poly.span
        periodic = specification_shadow(hdata, blocks, eps, period=period)
        assert max(periodic.errors) < eps
        assert periodic.periodicity_error < 1e-8

    def test_gap_violation(self, poly, hdata, rng):
        """Blocks closer than N(ε) are refused."""
        gap, margin = specification_gap(hdata, 1e-3)
        spans = [(0, 5), (5 + gap - 1, 10 + gap)]
        blocks = [(s, block_point(poly, rng.random(2).tolist(), *s, margin)) for s in spans]
        with pytest.raises(HomoclinicConfigurationError, match="gap violation"):
            specification_shadow(hdata, blocks, 1e-3)
        with pytest.raises(HomoclinicConfigurationError):
            specification_shadow(hdata, [], 1e-3)


@pytest.mark.poly("u^2-u-1")
class TestBetaEncode:
    """Tests related to `beta_encode`."""

    def test_golden_mean(self, hdata, haar):
        """Digits avoid 11 and decode back to x."""
        for _ in range(20):
            x = haar()
            v = beta_encode(hdata, x)
            assert is_golden_mean_admissible(v.values.tolist())
            lo, hi = interior_window(hdata, v.v, 1e-9, sup=1.0)
            assert x.distance(xi(hdata, v, (lo, hi)), lo, hi) < 1e-6

    def test_requires_canonical(self):
        """The sign-flipped polynomial must be written canonically."""
        data = build_homoclinic(parse_poly("-u^2+u+1"), window=16)
        x = XfPoint.from_torus(parse_poly("u^2-u-1"), [0.3, 0.6], -16, 16)
        with pytest.raises(HomoclinicConfigurationError):
            beta_encode(data, x)

    def test_requires_pisot(self):
        """Only Pisot polynomials have β-expansions."""
        f = parse_poly("u^4-u^3-u^2-u+1")
        data = build_homoclinic(f, window=16)
        with pytest.raises(BranchError):
            beta_encode(data, XfPoint.from_torus(f, [0.1, 0.2, 0.3, 0.4], -16, 16))

    def test_parry_expansion(self, spectrum):
        """Quasi-greedy expansions of 1: (10)^∞ for the golden mean, (20)^∞ for 1 + √2."""
        assert parry_expansion(pisot_root(spectrum), 6) == [1, 0, 1, 0, 1, 0]
        assert parry_expansion(1 + math.sqrt(2), 4) == [2, 0, 2, 0]

    @pytest.mark.parametrize(
        ("word", "expected"),
        [
            ([0, 1, 0, 1], True),
            ([1, 0, 1, 0, 1, 0], True),
            ([1, 1], False),
            ([0, 1, 1, 0], False),
        ],
    )
    def test_admissible(self, word, expected):
        """Against (10)^∞ admissibility means no two adjacent ones."""
        assert beta_admissible(word, [1, 0, 1, 0, 1, 0]) is expected

    def test_second_code(self, poly, spectrum):
        """100 and 011 have the same image; only the first is admissible."""
        word = [0] * 10 + [1, 0, 0] + [0] * 10
        other = second_code(poly, word, [1] * len(word), alphabet=1, margin=4)
        assert other is not None
        assert other != word
        assert set(other) <= {0, 1}
        expansion = parry_expansion(pisot_root(spectrum), len(word))
        assert second_code(poly, word, expansion, alphabet=1, margin=4) is None

    def test_injectivity(self, hdata, rng):
        """No sampled point has a second admissible code."""
        report = beta_injectivity(hdata, rng, 5, window=32)
        assert report.samples == 5
        assert report.collisions == 0
        assert report.rate == 0.0


@pytest.mark.poly("u^2+3u+1")
class TestKappaLift:
    """Tests related to `kappa_lift` and `fixed_point_windows`."""

    def test_windows(self, poly):
        """κ = |f(1)| = 5 and every fixed point has one lift in J̃."""
        windows = fixed_point_windows(poly)
        assert windows.kappa == 5
        assert windows.inner == pytest.approx((-0.1, 0.9))
        assert windows.outer == pytest.approx((-0.125, 0.925))
        assert windows.fixed_points == tuple(Fraction(j, 5) for j in range(5))
        for t in windows.fixed_points:
            assert len(windows.preimages(float(t))) == 1
        assert len(windows.preimages(0.91)) == 2
        np.testing.assert_allclose(windows.lift([0.95, 0.5, 0.0]), [-0.05, 0.5, 0.0])

    def test_fixed_points(self, hdata):
        """The fixed point j/5 lifts to the constant word j."""
        codes = []
        for j in range(5):
            x = XfPoint(SeqWindow(-8, [j / 5] * 17, SeqKind.TORUS))
            codes.append(set(kappa_lift(hdata, x).values.tolist()))
        assert codes == [{j} for j in range(5)]

    def test_round_trip(self, poly, hdata, haar):
        """ξ(κ-lift symbols of x) = x on the certified interior."""
        for _ in range(5):
            x = haar()
            v = kappa_lift(hdata, x)
            assert v.v.sup_norm() <= one_norm(poly)
            lo, hi = interior_window(hdata, v.v, sup=float(v.alphabet_bound))
            assert x.distance(xi(hdata, v, (lo, hi)), lo, hi) < 1e-8

    def test_vanishing_at_one(self):
        """f(1) = 0 leaves infinitely many fixed points."""
        with pytest.raises(BranchError):
            fixed_point_windows(parse_poly("u^2-3u+2"))


class TestReduce:
    """Tests related to `wstar_reduce`."""

    @pytest.mark.parametrize("values", [[0, 0, 0], [-1, 2, 0]])
    def test_coset_minimum(self, values):
        """Members of one coset reduce to the same sequence."""
        f = parse_poly("u-2")
        result = wstar_reduce(f, CoverSeq.finite(values, 0, 3), 8, 2)
        assert result.cover.values.tolist() == [-2, 3, 2]
        assert not result.exhausted

    def test_moves(self):
        """The recorded h gives v - f(σ̄)h."""
        result = wstar_reduce(parse_poly("u-2"), CoverSeq.finite([0, 0, 0], 0, 3), 8, 2)
        assert result.h == {1: 2, 2: 1}

    def test_idempotent(self):
        """Reducing twice changes nothing."""
        f = parse_poly("u-2")
        once = wstar_reduce(f, CoverSeq.finite([1, 0, 1], 0, 3))
        twice = wstar_reduce(f, once.cover)
        assert twice.cover.values.tolist() == once.cover.values.tolist()
        assert twice.h == {}

    def test_budget(self, caplog):
        """An exhausted search returns the input and says so."""
        result = wstar_reduce(
            parse_poly("u-2"), CoverSeq.finite([0, 0, 0], 0, 3), 8, 2, node_budget=1
        )
        assert result.exhausted
        assert result.cover.values.tolist() == [0, 0, 0]
        assert "stopped" in caplog.text


class TestAlphabet:
    """Tests related to the cover alphabet."""

    @pytest.mark.poly("u^2-3u+1")
    def test_entropy(self, poly, spectrum):
        """log(2‖f‖₁ + 1) exceeds h(α_f)."""
        assert alphabet_entropy(poly) == pytest.approx(math.log(11))
        check_alphabet_entropy(poly, spectrum)

    @pytest.mark.poly("u^2-3u+1")
    def test_small_alphabet(self, poly, spectrum):
        """{0} and {-1, 0, 1} carry entropy 0 and log 3 against h = 2 log φ."""
        with pytest.raises(HomoclinicConfigurationError, match="too small"):
            check_alphabet_entropy(poly, spectrum, 0)
        assert alphabet_entropy(poly, 1) == pytest.approx(math.log(3))
        check_alphabet_entropy(poly, spectrum, 1)

    @pytest.mark.parametrize(
        ("word", "expected"),
        [([0, 1, 0, 1], True), ([1, 1], False), ([0, 2], False), ([], True)],
    )
    def test_golden_mean_words(self, word, expected):
        """No two adjacent ones."""
        assert is_golden_mean_admissible(word) is expected

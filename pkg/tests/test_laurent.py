"""Tests related to Laurent polynomials and sequence windows."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covers.exceptions import HomoclinicConfigurationError, WindowError
from covers.laurent import (
    LaurentPoly,
    SeqKind,
    SeqWindow,
    Tail,
    TailKind,
    adjoint,
    apply_poly_shift,
    canonicalize,
    one_norm,
    parse_poly,
    torus_wrap,
)

coefficients = st.lists(st.integers(-5, 5), min_size=1, max_size=6).filter(
    lambda cs: cs[0] != 0 and cs[-1] != 0
)
laurent_polys = st.builds(LaurentPoly, coefficients.map(tuple), st.integers(-3, 3))


class TestParsePoly:
    """Tests related to `parse_poly`."""

    @pytest.mark.parametrize(
        ("text", "coeffs", "low"),
        [
            ("5u^2-6u+5", (5, -6, 5), 0),
            ("5,-6,5", (5, -6, 5), 0),
            ("1,0,-1", (1, 0, -1), 0),
            ("u^-1 + 3 + u", (1, 3, 1), -1),
            ("2u", (2,), 1),
            ("3-2u", (3, -2), 0),
            ("(u-1)(u+1)", (-1, 0, 1), 0),
            ("0,0,1,1", (1, 1), 2),
        ],
    )
    def test_forms(self, text, coeffs, low):
        """Comma lists and human strings should both parse."""
        f = parse_poly(text)
        assert f.coeffs == coeffs
        assert f.low == low

    @pytest.mark.parametrize("text", ["", "   ", "u/2", "x+1", "1,a", "u^(1/2)", "u+"])
    def test_rejects(self, text):
        """Empty strings, fractions and foreign symbols are errors."""
        with pytest.raises(HomoclinicConfigurationError):
            parse_poly(text)

    @pytest.mark.parametrize("text", ["5u^2-6u+5", "u+3+u^-1", "-u^3+2", "u^2-u-1"])
    def test_str_round_trip(self, text):
        """The human form should parse back to the same polynomial."""
        f = parse_poly(text)
        assert str(f) == text
        assert parse_poly(str(f)) == f


class TestLaurentPoly:
    """Tests related to `LaurentPoly`."""

    def test_strips_zeros(self):
        """Zeros at either end move into `low`."""
        f = LaurentPoly((0, 0, 3, 1, 0), -1)
        assert f.coeffs == (3, 1)
        assert f.low == 1
        assert f.degree == 2
        assert f.span == 1

    def test_zero(self):
        """The zero polynomial has no coefficients."""
        assert LaurentPoly((0, 0)).is_zero

    def test_arithmetic(self):
        """Sums, differences and products follow the coefficients."""
        a, b = parse_poly("u-1"), parse_poly("u+1")
        assert a * b == parse_poly("u^2-1")
        assert a + b == parse_poly("2u")
        assert a - b == parse_poly("-2")
        assert -a == parse_poly("1-u")

    def test_evaluate(self):
        """Evaluation handles negative exponents and arrays."""
        f = parse_poly("u^-1+3+u")
        assert complex(f.evaluate(1)) == pytest.approx(5)
        values = f.evaluate(np.array([1, -1, 2]))
        np.testing.assert_allclose(values, [5, 1, 5.5])

    def test_coefficient(self):
        """Out-of-range coefficients are zero."""
        f = parse_poly("5u^2-6u+5")
        assert [f.coefficient(k) for k in range(-1, 4)] == [0, 5, -6, 5, 0]

    def test_canonicalize(self):
        """The canonical form starts at u^0 with a positive leading coefficient."""
        g = canonicalize(parse_poly("-u^3+3u^2-u"))
        assert g.coeffs == (1, -3, 1)
        assert g.low == 0
        assert g.sign == -1

    def test_adjoint(self):
        """f*(u) = f(u^-1)."""
        f = parse_poly("u^2-3u+2")
        assert adjoint(f) == LaurentPoly((1, -3, 2), -2)

    def test_one_norm(self):
        """‖f‖₁ sums absolute coefficients."""
        assert one_norm(parse_poly("5u^2-6u+5")) == 16

    @given(laurent_polys)
    def test_adjoint_involution(self, f):
        """Taking the adjoint twice gives f back."""
        assert adjoint(adjoint(f)) == f


def test_torus_wrap():
    """Values land in [0, 1)."""
    np.testing.assert_allclose(torus_wrap([-0.25, 1.0, 2.5, 0.0]), [0.75, 0.0, 0.5, 0.0])


class TestSeqWindow:
    """Tests related to `SeqWindow`."""

    def test_delta(self):
        """δ has zero tails."""
        s = SeqWindow.delta(0, -2, 2)
        assert s.values.tolist() == [0, 0, 1, 0, 0]
        assert s.at(7) == 0
        assert s.at(-9) == 0

    def test_shift(self):
        """(σ̄s)_n = s_{n+1}."""
        s = SeqWindow.delta(0, -2, 2)
        assert s.shift(1).at(-1) == 1
        assert s.shift(-3).at(3) == 1

    def test_periodic(self):
        """Periodic tails repeat the stored period."""
        s = SeqWindow(0, [1, 2, 3], SeqKind.INTEGER, Tail.periodic(3), Tail.periodic(3))
        assert s.period == 3
        assert s.at(7) == 2
        assert s.at(-1) == 3
        assert s.extended(-3, 5).values.tolist() == [1, 2, 3, 1, 2, 3, 1, 2, 3]

    def test_unknown_tail(self):
        """Values beyond an unknown tail are not made up."""
        s = SeqWindow(0, [1.0, 2.0])
        with pytest.raises(WindowError):
            s.at(2)

    def test_empty(self):
        """A window needs at least one value."""
        with pytest.raises(WindowError):
            SeqWindow(0, [])

    def test_torus_range(self):
        """Torus values must already be reduced."""
        with pytest.raises(HomoclinicConfigurationError):
            SeqWindow(0, [0.5, 1.0], SeqKind.TORUS)

    def test_mismatched_periods(self):
        """Both tails need the same period."""
        with pytest.raises(HomoclinicConfigurationError):
            SeqWindow(0, [1, 2, 3], SeqKind.INTEGER, Tail.periodic(3), Tail.zero())

    def test_restrict(self):
        """A restriction forgets the tails."""
        s = SeqWindow.delta(0, -3, 3).restrict(-1, 1)
        assert s.lo == -1
        assert s.values.tolist() == [0, 1, 0]
        assert not s.left.exact
        with pytest.raises(WindowError):
            s.restrict(-5, 0)

    def test_rational(self):
        """Rational windows keep Fractions."""
        s = SeqWindow(0, [Fraction(1, 3), Fraction(2, 3)], SeqKind.RATIONAL)
        assert s.at(1) == Fraction(2, 3)
        assert (s + s).values == (Fraction(2, 3), Fraction(4, 3))

    def test_combine(self):
        """Sums live on the common window."""
        a = SeqWindow(0, [1.0, 2.0, 3.0])
        b = SeqWindow(1, [10.0, 20.0, 30.0])
        total = a + b
        assert (total.lo, total.hi) == (1, 2)
        assert total.values.tolist() == [12.0, 23.0]
        with pytest.raises(WindowError):
            a - SeqWindow(5, [1.0])

    @pytest.mark.parametrize("order", ["small_first", "large_first"])
    def test_combine_zero_tails(self, order):
        """Zero tails survive on the union of the windows, in either order."""
        small = SeqWindow.delta(0, -1, 1)
        large = SeqWindow.delta(3, -4, 6)
        total = small + large if order == "small_first" else large + small
        assert (total.lo, total.hi) == (-4, 6)
        assert total.left.kind is TailKind.ZERO
        assert total.right.kind is TailKind.ZERO
        assert total.at(0) == 1
        assert total.at(3) == 1
        assert total.at(20) == 0
        difference = small - SeqWindow.delta(5, 4, 8)
        assert (difference.lo, difference.hi) == (-1, 8)
        assert difference.at(5) == -1


class TestApplyPolyShift:
    """Tests related to `apply_poly_shift`."""

    def test_delta(self):
        """(f(σ̄)δ_0)_n = f_{-n}."""
        out = apply_poly_shift(parse_poly("5u^2-6u+5"), SeqWindow.delta())
        assert (out.lo, out.hi) == (-2, 0)
        assert out.values.tolist() == [5, -6, 5]

    def test_unknown_tails_shrink(self):
        """Unknown tails shrink the window by the reach of f."""
        s = SeqWindow(0, np.ones(11))
        out = apply_poly_shift(parse_poly("u^2-3u+1"), s)
        assert (out.lo, out.hi) == (0, 8)
        np.testing.assert_allclose(out.values, -1.0)

    def test_too_short(self):
        """A window shorter than the span of f is an error."""
        with pytest.raises(WindowError):
            apply_poly_shift(parse_poly("u^2-3u+1"), SeqWindow(0, [1.0, 2.0]))

    def test_zero_poly(self):
        """The zero polynomial does not act."""
        with pytest.raises(HomoclinicConfigurationError):
            apply_poly_shift(LaurentPoly(()), SeqWindow.delta())

    def test_periodic(self):
        """Periodic input gives periodic output."""
        s = SeqWindow(0, [1, 0], SeqKind.INTEGER, Tail.periodic(2), Tail.periodic(2))
        out = apply_poly_shift(parse_poly("u+1"), s)
        assert out.period == 2
        assert out.values.tolist() == [1, 1]

    def test_torus(self):
        """Torus windows stay reduced."""
        s = SeqWindow(0, [0.75, 0.5, 0.25], SeqKind.TORUS)
        out = apply_poly_shift(parse_poly("u+1"), s)
        np.testing.assert_allclose(out.values, [0.25, 0.75])

    @given(laurent_polys, laurent_polys, st.lists(st.integers(-9, 9), min_size=1, max_size=8))
    def test_composition(self, g, h, values):
        """g(σ̄)h(σ̄)s = (gh)(σ̄)s for finitely supported s."""
        s = SeqWindow(0, values, SeqKind.INTEGER, Tail.zero(), Tail.zero())
        twice = apply_poly_shift(g, apply_poly_shift(h, s))
        once = apply_poly_shift(g * h, s)
        assert (twice.lo, twice.hi) == (once.lo, once.hi)
        assert twice.values.tolist() == once.values.tolist()

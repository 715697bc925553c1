"""Tests for truncated series and the L/P conversions."""

import pytest

from nfw.errors import NonPolynomialSeriesError, WindowError
from nfw.series import (
    TruncatedSeries,
    Window,
    ambient_poincare,
    diagonal,
    first_discrepancy,
    geometric_inverse,
    l_from_p,
    mul_factor,
    mul_factors,
    p_from_l,
    sum_of_coefficients,
)

CUSP_AMBIENT = [1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3]
CUSP_CI = [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]


def one_variable(values: list[int], lo: int = 0, floor: int | None = 0) -> TruncatedSeries:
    window = Window((lo,), (lo + len(values) - 1,))
    return TruncatedSeries(window, {(lo + i,): c for i, c in enumerate(values)}, floor)


class TestWindow:
    """Test integer windows."""

    def test_parse(self):
        """Test LO..HI parsing."""
        window = Window.parse("0..12")
        assert window.size == 13
        assert Window.parse(" -2 .. 3 ", arity=2) == Window((-2, -2), (3, 3))

    @pytest.mark.parametrize("text", ["3..1", "0-5", "a..b", ""])
    def test_parse_errors(self, text):
        """Test malformed or empty windows are rejected."""
        with pytest.raises(ValueError):
            Window.parse(text)

    def test_empty_window(self):
        """Test an inverted corner raises WindowError."""
        with pytest.raises(WindowError):
            Window((2,), (1,))

    def test_points_and_membership(self):
        """Test lexicographic points and containment."""
        window = Window((0, 0), (1, 1))
        assert list(window.points()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert (1, 0) in window
        assert (2, 0) not in window
        assert window.intersect(Window((1, -3), (4, 0))) == Window((1, 0), (1, 0))


class TestTruncatedSeries:
    """Test coefficient access and serialization."""

    def test_outside_window(self):
        """Test unknown coefficients raise and known zeros do not."""
        series = one_variable([1, 2, 3], lo=0, floor=None)
        with pytest.raises(WindowError):
            series.coefficient((5,))
        assert one_variable([1, 2, 3])[(-4,)] == 0

    def test_coefficient_outside_window_rejected(self):
        """Test construction keeps coefficients inside the window."""
        with pytest.raises(ValueError, match="outside"):
            TruncatedSeries(Window((0,), (1,)), {(3,): 1})

    def test_dict_roundtrip(self):
        """Test the dict form restores the series."""
        series = one_variable([1, 0, -2])
        assert TruncatedSeries.from_dict(series.to_dict()) == series

    def test_restrict(self):
        """Test restriction to a subwindow."""
        assert one_variable([1, 2, 3, 4]).restrict(Window((1,), (2,))).to_list() == [2, 3]


class TestProducts:
    """Test geometric series and factor products."""

    def test_geometric_inverse(self):
        """Test 1 / (1 - t^2)."""
        assert geometric_inverse((2,), Window((0,), (6,))).to_list() == [1, 0, 1, 0, 1, 0, 1]

    def test_geometric_inverse_rejects_zero(self):
        """Test a zero exponent has no inverse."""
        with pytest.raises(ValueError):
            geometric_inverse((0,), Window((0,), (3,)))

    def test_ambient_poincare(self):
        """Test 1 / ((1 - t^3)(1 - t^2)) on [0, 12]."""
        series = ambient_poincare([(3,), (2,)], Window((0,), (12,)))
        assert series.to_list() == CUSP_AMBIENT

    def test_ambient_poincare_counts_points(self):
        """Test two-variable coefficients count lattice points."""
        series = ambient_poincare([(1, 2), (2, 1)], Window((0, 0), (3, 3)))
        assert series[(1, 2)] == 1
        assert series[(3, 3)] == 1
        assert series[(1, 1)] == 0
        assert series[(0, 0)] == 1

    def test_complete_intersection_series(self):
        """Test (1 - t^6) / ((1 - t^3)(1 - t^2)) on [0, 12]."""
        ambient = ambient_poincare([(3,), (2,)], Window((0,), (12,)))
        series = mul_factors(ambient, [(6,)])
        assert series.window == Window((0,), (12,))
        assert series.to_list() == CUSP_CI

    def test_factor_without_floor_shrinks_window(self):
        """Test the lower corner moves up when nothing is known below."""
        series = mul_factor(one_variable([1, 1, 1, 1, 1, 1], floor=None), (2,))
        assert series.window == Window((2,), (5,))
        assert series.to_list() == [0, 0, 0, 0]


class TestConversions:
    """Test L/P conversions, diagonals and sums."""

    def test_p_l_roundtrip(self):
        """Test P -> L -> P restores P on the nonnegative window."""
        window = Window((0, 0), (4, 4))
        p = ambient_poincare([(1, 2), (2, 1)], window)
        assert p_from_l(l_from_p(p), window) == p

    def test_p_from_l_needs_reach(self):
        """Test L must extend below zero."""
        with pytest.raises(WindowError):
            p_from_l(one_variable([1, 2, 3], floor=None))

    def test_l_from_p_needs_floor(self):
        """Test P must be known to vanish below 0."""
        with pytest.raises(WindowError):
            l_from_p(one_variable([1, 2], floor=None))

    def test_diagonal(self):
        """Test the diagonal of a two-variable series."""
        series = ambient_poincare([(1, 2), (2, 1)], Window((0, 0), (3, 3)))
        assert diagonal(series).to_list() == [1, 0, 0, 1]

    def test_sum_of_coefficients(self):
        """Test the value at 1 of a polynomial series."""
        assert sum_of_coefficients(one_variable([1, 0, 1, 0, 0, 0]), 3) == 2

    def test_sum_of_coefficients_tail(self):
        """Test a nonzero tail is reported."""
        with pytest.raises(NonPolynomialSeriesError, match="degree 4"):
            sum_of_coefficients(one_variable([1, 0, 1, 0, 5]), 3)

    def test_sum_of_coefficients_short_window(self):
        """Test the window must reach the degree bound."""
        with pytest.raises(WindowError):
            sum_of_coefficients(one_variable([1, 0]), 3)

    def test_first_discrepancy(self):
        """Test the first differing coefficient is found."""
        a = one_variable([1, 2, 3])
        b = one_variable([1, 2, 4, 5])
        assert first_discrepancy(a, b) == ((2,), 3, 4)
        assert first_discrepancy(a, a) is None

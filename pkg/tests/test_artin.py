"""Tests for graded dimensions in Artinian quotients."""

import pytest

from nfw.artin import (
    artinian_basis,
    bar_dim,
    bar_dim_one_index,
    graded_report,
    ideal_image,
    induced_dim,
    induced_dim_one_index,
    quotient_total_dim,
    thm14_equal,
)
from nfw.errors import ResourceLimitError
from nfw.lattice import FiltrationSpec
from nfw.series import Window

CUSP_SPEC = FiltrationSpec(normals=((3, 2),), offsets=(6,), m=6, n=2)
PAIR_SPEC = FiltrationSpec(normals=((1, 2), (2, 1)), offsets=(3, 3), m=3, n=2)
CUSP_CI = [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]


class TestArtinianQuotient:
    """Test monomial bases of O / F_mu+1."""

    def test_basis(self):
        """Test the basis below psi level 6 of the cusp."""
        quotient = artinian_basis(CUSP_SPEC, (6,))
        assert quotient.dim == 7
        assert (2, 0) in quotient.basis
        assert (1, 2) not in quotient.basis
        assert len(quotient.monomials_in((6,))) == 2

    def test_vector_drops_deep_terms(self, poly):
        """Test terms in F_mu+1 vanish in the quotient."""
        quotient = artinian_basis(CUSP_SPEC, (3,))
        vector = quotient.vector(poly("z1 + z2^3"))
        assert list(vector.values()) == [1]

    def test_ideal_image(self, poly):
        """Test the image of (z1) below level 5."""
        quotient = artinian_basis(CUSP_SPEC, (5,))
        assert ideal_image(quotient, [poly("z1")]).rank == 2


class TestInducedFiltration:
    """Test graded dimensions on Y."""

    def test_complete_intersection(self, poly):
        """Test induced dims of the cusp match (1 - t^6) / ((1 - t^3)(1 - t^2))."""
        f = poly("z1^2 + z2^3")
        assert [induced_dim(CUSP_SPEC, (l,), [f]) for l in range(13)] == CUSP_CI

    def test_bar_dims(self, poly):
        """Test the relation dims coincide for the cusp."""
        f = poly("z1^2 + z2^3")
        assert [bar_dim(CUSP_SPEC, (l,), [f], [(6,)]) for l in range(13)] == CUSP_CI

    def test_one_index_partials(self, poly):
        """Test Q-hat = 1 + tau^2 for the partials of the cusp."""
        partials = [poly("2*z1"), poly("3*z2^2")]
        expected = [1, 0, 1, 0, 0, 0, 0, 0, 0]
        assert [induced_dim_one_index(CUSP_SPEC, l, partials) for l in range(9)] == expected
        assert [bar_dim_one_index(CUSP_SPEC, l, partials, [3, 4]) for l in range(9)] == expected

    def test_graded_report(self, poly):
        """Test the per-mu rows."""
        rows = graded_report(CUSP_SPEC, Window((5,), (6,)), [poly("z1^2 + z2^3")], [(6,)])
        assert [row.to_list() for row in rows] == [[[5], 1, 1, 1], [[6], 2, 1, 1]]


class TestIntersections:
    """Test the induced filtration against the intersection of single-index pieces."""

    def test_monomial_filtration_on_o(self):
        """Test F_mu is the intersection of its coordinate pieces on O itself."""
        assert thm14_equal(PAIR_SPEC, (1, 1), [])
        assert thm14_equal(PAIR_SPEC, (2, 3), [])

    def test_single_facet(self, poly):
        """Test r = 1 is always an equality."""
        assert thm14_equal(CUSP_SPEC, (6,), [poly("z1^2 + z2^3")])

    def test_negative_mu(self):
        """Test mu must be nonnegative."""
        with pytest.raises(ValueError, match="N\\^r"):
            thm14_equal(PAIR_SPEC, (-1, 0), [])


class TestQuotientTotalDim:
    """Test dim O / (g_1, ..., g_n)."""

    @pytest.mark.parametrize(
        "partials,expected",
        [
            (["2*z1", "3*z2^2"], 2),
            (["3*z1^2", "4*z2^3"], 6),
            (["3*z1^2 + z2", "z1 + 3*z2^2"], 1),
        ],
    )
    def test_milnor_numbers(self, poly, partials, expected):
        """Test Milnor numbers of plane curve germs."""
        assert quotient_total_dim([poly(p) for p in partials]) == expected

    def test_infinite(self, poly):
        """Test a non-isolated ideal exhausts the depth limit."""
        with pytest.raises(ResourceLimitError, match="infinite"):
            quotient_total_dim([poly("z1"), poly("z1^2")], max_depth=6)

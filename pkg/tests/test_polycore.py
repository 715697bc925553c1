"""Tests for polynomial parsing and arithmetic."""

import random
from fractions import Fraction

import pytest

from nfw.errors import PolynomialSyntaxError
from nfw.polycore import Polynomial, parse_polynomial, partial_derivative

NAMES = ["z1", "z2"]

SAMPLES = [
    {},
    {(0, 0): 3},
    {(1, 0): -1, (0, 2): 5},
    {(4, 4): 2, (0, 0): -5, (2, 1): 1},
    {(3, 0): 1, (1, 1): 1, (0, 3): 1},
    {(0, 4): -3, (4, 0): -3, (2, 2): 4, (1, 3): -1},
]
polynomials = [Polynomial.from_dict(2, terms) for terms in SAMPLES]


class TestParsing:
    """Test the polynomial grammar."""

    def test_sum_of_powers(self):
        """Test a plain sum of monomials."""
        p = parse_polynomial("z1^2 + z2^3", NAMES)
        assert p.as_dict() == {(2, 0): 1, (0, 3): 1}
        assert p.degree == 3

    def test_rational_coefficients(self):
        """Test rational and implicit-product coefficients."""
        p = parse_polynomial("3/2*z1*z2 - z2 + 3z1", NAMES)
        assert p.coefficient((1, 1)) == Fraction(3, 2)
        assert p.coefficient((0, 1)) == -1
        assert p.coefficient((1, 0)) == 3

    def test_like_terms_collected(self):
        """Test like terms are combined and cancelled."""
        assert parse_polynomial("z1 + z1", NAMES).as_dict() == {(1, 0): 2}
        assert parse_polynomial("z1*z2 - z2*z1", NAMES).is_zero

    def test_unknown_variable_position(self):
        """Test unknown names are reported at their offset."""
        with pytest.raises(PolynomialSyntaxError, match="unknown variable") as info:
            parse_polynomial("z1 + z3", NAMES)
        assert info.value.position == 5

    def test_trailing_operator(self):
        """Test a dangling sign is an error at the end of input."""
        with pytest.raises(PolynomialSyntaxError, match="unexpected end") as info:
            parse_polynomial("z1 +", NAMES)
        assert info.value.position == 4

    def test_zero_denominator(self):
        """Test zero denominators are rejected."""
        with pytest.raises(PolynomialSyntaxError, match="zero denominator"):
            parse_polynomial("1/0*z1", NAMES)

    def test_negative_exponent_needs_laurent(self):
        """Test negative exponents only parse in laurent mode."""
        with pytest.raises(PolynomialSyntaxError, match="laurent"):
            parse_polynomial("z1^-2", NAMES)
        p = parse_polynomial("z1^-2*z2 + 1", NAMES, laurent=True)
        assert p.support() == {(-2, 1), (0, 0)}
        assert not p.is_germ()

    def test_exponent_overflow(self):
        """Test exponents beyond the 32-bit range raise OverflowError."""
        with pytest.raises(OverflowError):
            parse_polynomial("z1^2147483648", NAMES)

    def test_canonical_text(self):
        """Test terms print in descending graded order."""
        assert parse_polynomial("z1^2 + z2^3", NAMES).to_text(NAMES) == "z2^3 + z1^2"
        assert parse_polynomial("1/2 - z1", NAMES).to_text(NAMES) == "-z1 + 1/2"
        assert Polynomial.zero(2).to_text(NAMES) == "0"

    @pytest.mark.parametrize("p", polynomials)
    def test_text_roundtrip(self, p):
        """Test printed text parses back to the same polynomial."""
        assert parse_polynomial(p.to_text(NAMES), NAMES) == p


class TestArithmetic:
    """Test polynomial arithmetic."""

    def test_square(self):
        """Test powers expand."""
        z = parse_polynomial("z1 + z2", NAMES)
        assert (z**2).as_dict() == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
        assert (z**0).as_dict() == {(0, 0): 1}

    def test_negative_power_rejected(self):
        """Test negative powers raise."""
        with pytest.raises(ValueError, match="non-negative"):
            parse_polynomial("z1", NAMES) ** -1

    def test_partial_derivatives(self):
        """Test derivatives of the bistellar germ."""
        f = parse_polynomial("z1^3 + z1*z2 + z2^3", NAMES)
        assert partial_derivative(f, 0) == parse_polynomial("3*z1^2 + z2", NAMES)
        assert partial_derivative(f, 1) == parse_polynomial("z1 + 3*z2^2", NAMES)
        with pytest.raises(ValueError, match="out of range"):
            partial_derivative(f, 2)

    def test_shift_and_restrict(self):
        """Test monomial shifts and term selection."""
        p = parse_polynomial("z1 + z2", NAMES)
        assert p.shift((1, 1)).support() == {(2, 1), (1, 2)}
        assert p.restrict([(1, 0)]).as_dict() == {(1, 0): 1}

    def test_mismatched_variables(self):
        """Test arithmetic across variable counts fails."""
        with pytest.raises(ValueError, match="mismatch"):
            Polynomial.constant(2, 1) + Polynomial.constant(3, 1)

    @pytest.mark.parametrize("a", polynomials)
    @pytest.mark.parametrize("b", polynomials[2:])
    def test_product_rule(self, a, b):
        """Test d(ab) = a db + b da."""
        for i in range(2):
            left = partial_derivative(a * b, i)
            right = a * partial_derivative(b, i) + b * partial_derivative(a, i)
            assert left == right


def random_polynomial(rng: random.Random, nvars: int = 2, degree: int = 4) -> Polynomial:
    terms = {
        tuple(rng.randint(0, degree) for _ in range(nvars)): Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
        for _ in range(rng.randint(1, 5))
    }
    return Polynomial.from_dict(nvars, terms)


class TestRandomCorpus:
    """Test ring laws and printing on seeded random polynomials."""

    @pytest.mark.parametrize("seed", range(4))
    def test_text_roundtrip(self, seed):
        """Test printed text parses back for random rational polynomials."""
        rng = random.Random(seed)
        names = ["z1", "z2", "z3"]
        for _ in range(25):
            p = random_polynomial(rng, nvars=3)
            assert parse_polynomial(p.to_text(names), names) == p

    @pytest.mark.parametrize("seed", range(4))
    def test_commutative_and_associative(self, seed):
        """Test ab = ba and (ab)c = a(bc) exactly."""
        rng = random.Random(seed)
        for _ in range(15):
            a, b, c = (random_polynomial(rng) for _ in range(3))
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)

    @pytest.mark.parametrize("seed", range(4))
    def test_support_of_product(self, seed):
        """Test supp(ab) lies in supp(a) + supp(b)."""
        rng = random.Random(seed)
        for _ in range(25):
            a, b = random_polynomial(rng), random_polynomial(rng)
            sums = {tuple(x + y for x, y in zip(p, q)) for p in a.support() for q in b.support()}
            assert (a * b).support() <= sums

"""Exact multivariate polynomials: representation, parsing and arithmetic."""

import logging
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from nfw.errors import PolynomialSyntaxError

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]
Scalar = int | Fraction

# Exponents must fit a signed 32-bit machine integer
EXPONENT_LIMIT = 2**31 - 1


def check_exponent(q: Exponent) -> None:
    """Raise OverflowError if any entry of q leaves the signed 32-bit range."""
    for e in q:
        if e > EXPONENT_LIMIT or e < -EXPONENT_LIMIT - 1:
            raise OverflowError(f"exponent {e} exceeds the 32-bit range")


def add_exponents(a: Exponent, b: Exponent) -> Exponent:
    """Componentwise sum with overflow check."""
    q = tuple(x + y for x, y in zip(a, b))
    check_exponent(q)
    return q


def grlex_key(q: Exponent) -> tuple[int, Exponent]:
    """Sort key for graded lexicographic order."""
    return (sum(q), q)


@dataclass(frozen=True)
class Polynomial:
    """
    Polynomial with rational coefficients in nvars variables.

    Terms are kept in canonical form: no zero coefficients, sorted by
    descending graded lexicographic order of the exponent.

    Args:
        nvars: Number of variables
        terms: Pairs (exponent, coefficient)
    """
    nvars: int
    terms: tuple[tuple[Exponent, Fraction], ...] = ()

    def __post_init__(self) -> None:
        if self.nvars < 0:
            raise ValueError("nvars must be non-negative")
        collected: dict[Exponent, Fraction] = {}
        for q, c in self.terms:
            q = tuple(int(e) for e in q)
            if len(q) != self.nvars:
                raise ValueError(f"exponent {q} does not have {self.nvars} entries")
            check_exponent(q)
            collected[q] = collected.get(q, Fraction(0)) + Fraction(c)
        canonical = tuple(
            (q, c)
            for q, c in sorted(collected.items(), key=lambda item: grlex_key(item[0]), reverse=True)
            if c != 0
        )
        object.__setattr__(self, "terms", canonical)

    @classmethod
    def from_dict(cls, nvars: int, mapping: Mapping[Exponent, Scalar]) -> "Polynomial":
        return cls(nvars, tuple((q, Fraction(c)) for q, c in mapping.items()))

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "Polynomial":
        return cls(nvars, (((0,) * nvars, Fraction(value)),))

    @classmethod
    def monomial(cls, q: Exponent, coefficient: Scalar = 1) -> "Polynomial":
        return cls(len(q), ((tuple(q), Fraction(coefficient)),))

    def as_dict(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    def support(self) -> frozenset[Exponent]:
        return frozenset(q for q, _ in self.terms)

    def coefficient(self, q: Exponent) -> Fraction:
        for term, c in self.terms:
            if term == q:
                return c
        return Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(q) for q, _ in self.terms), default=-1)

    def is_germ(self) -> bool:
        """True if every exponent is nonnegative."""
        return all(e >= 0 for q, _ in self.terms for e in q)

    def _check_compatible(self, other: "Polynomial") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        return Polynomial(self.nvars, self.terms + other.terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, tuple((q, -c) for q, c in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.nvars, tuple((q, c * other) for q, c in self.terms))
        return multiply(self, other)

    def __rmul__(self, other: Scalar) -> "Polynomial":
        return self * other

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("polynomial powers must be non-negative")
        result = Polynomial.constant(self.nvars, 1)
        for _ in range(exponent):
            result = multiply(result, self)
        return result

    def shift(self, q: Exponent) -> "Polynomial":
        """Multiply by the monomial z^q."""
        return Polynomial(self.nvars, tuple((add_exponents(t, q), c) for t, c in self.terms))

    def restrict(self, keep: Iterable[Exponent]) -> "Polynomial":
        """Keep only the terms whose exponent lies in keep."""
        wanted = set(keep)
        return Polynomial(self.nvars, tuple((q, c) for q, c in self.terms if q in wanted))

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form; parse_polynomial(p.to_text(names), names) == p."""
        names = list(names) if names is not None else default_names(self.nvars)
        if not self.terms:
            return "0"
        parts: list[str] = []
        for index, (q, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            factors = []
            for name, e in zip(names, q):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = _rational_text(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{_rational_text(magnitude)}*{mono}"
            if index == 0:
                parts.append(f"-{body}" if sign == "-" else body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()


def default_names(nvars: int) -> list[str]:
    return [f"z{i + 1}" for i in range(nvars)]


def _rational_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# Grammar:
#   poly     := [sign] term (sign term)*
#   term     := rational ['*'] monomial | rational | monomial
#   monomial := factor ('*' factor)*
#   factor   := var ['^' uint]          ('^-' uint in laurent mode)
#   rational := uint ['/' uint]
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_UINT = re.compile(r"[0-9]+")


class _Parser:
    def __init__(self, text: str, names: Sequence[str], laurent: bool):
        self.text = text
        self.index = {name: i for i, name in enumerate(names)}
        if len(self.index) != len(names):
            raise ValueError("variable names must be distinct")
        self.nvars = len(names)
        self.laurent = laurent
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, message: str, position: int | None = None) -> PolynomialSyntaxError:
        return PolynomialSyntaxError(message, self.pos if position is None else position)

    def _uint(self) -> int:
        self._skip()
        match = _UINT.match(self.text, self.pos)
        if not match:
            raise self._error("expected an unsigned integer")
        self.pos = match.end()
        return int(match.group())

    def parse(self) -> Polynomial:
        terms: dict[Exponent, Fraction] = {}
        sign = 1
        nxt = self._peek()
        if nxt and nxt in "+-":
            sign = -1 if nxt == "-" else 1
            self.pos += 1
        while True:
            q, c = self._term()
            terms[q] = terms.get(q, Fraction(0)) + sign * c
            nxt = self._peek()
            if nxt == "":
                break
            if nxt not in "+-":
                raise self._error(f"unexpected character {nxt!r}")
            sign = -1 if nxt == "-" else 1
            self.pos += 1
        return Polynomial.from_dict(self.nvars, terms)

    def _term(self) -> tuple[Exponent, Fraction]:
        nxt = self._peek()
        if nxt == "":
            raise self._error("unexpected end of input")
        coefficient = Fraction(1)
        if nxt.isdigit():
            coefficient = self._rational()
            nxt = self._peek()
            if nxt == "*":
                self.pos += 1
                return self._monomial(), coefficient
            if nxt and (nxt.isalpha() or nxt == "_"):
                return self._monomial(), coefficient
            return (0,) * self.nvars, coefficient
        if nxt.isalpha() or nxt == "_":
            return self._monomial(), coefficient
        raise self._error(f"unexpected character {nxt!r}")

    def _rational(self) -> Fraction:
        numerator = self._uint()
        if self._peek() == "/":
            self.pos += 1
            self._skip()
            start = self.pos
            denominator = self._uint()
            if denominator == 0:
                raise self._error("zero denominator", start)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def _monomial(self) -> Exponent:
        exponent = [0] * self.nvars
        while True:
            self._skip()
            start = self.pos
            match = _IDENT.match(self.text, self.pos)
            if not match:
                raise self._error("expected a variable name")
            name = match.group()
            if name not in self.index:
                raise self._error(f"unknown variable {name!r}", start)
            self.pos = match.end()
            power = 1
            if self._peek() == "^":
                self.pos += 1
                negative = False
                if self._peek() == "-":
                    if not self.laurent:
                        raise self._error("negative exponents need laurent mode")
                    negative = True
                    self.pos += 1
                power = -self._uint() if negative else self._uint()
            exponent[self.index[name]] += power
            if self._peek() != "*":
                break
            self.pos += 1
        q = tuple(exponent)
        check_exponent(q)
        return q


def parse_polynomial(text: str, names: Sequence[str], laurent: bool = False) -> Polynomial:
    """
    Parse polynomial text over the declared variable names.

    Args:
        text: Polynomial in the ASCII grammar, e.g. "z1^2 + 2/3*z1*z2"
        names: Declared variable names; their order fixes exponent positions
        laurent: Accept negative exponents written as "z1^-2"

    Returns:
        Polynomial with like terms collected

    Raises:
        PolynomialSyntaxError: on grammar violations, unknown names or zero denominators
    """
    return _Parser(text, names, laurent).parse()


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """Formal derivative with respect to variable i (0-based)."""
    if not 0 <= i < p.nvars:
        raise ValueError(f"variable index {i} out of range for {p.nvars} variables")
    terms = []
    for q, c in p.terms:
        if q[i] != 0:
            lowered = q[:i] + (q[i] - 1,) + q[i + 1:]
            terms.append((lowered, c * q[i]))
    return Polynomial(p.nvars, tuple(terms))


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product of two polynomials over the same variables."""
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} != {b.nvars}")
    product: dict[Exponent, Fraction] = {}
    for qa, ca in a.terms:
        for qb, cb in b.terms:
            q = add_exponents(qa, qb)
            product[q] = product.get(q, Fraction(0)) + ca * cb
    return Polynomial.from_dict(a.nvars, product)


def product_of(polys: Sequence[Polynomial], nvars: int) -> Polynomial:
    """Product of a list of polynomials; the empty product is 1."""
    return reduce(multiply, polys, Polynomial.constant(nvars, 1))

"""Buchberger's algorithm over QQ and dimensions of affine and torus varieties."""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from nfw.errors import ResourceLimitError
from nfw.polycore import Exponent, Polynomial

logger = logging.getLogger(__name__)

MonomialOrder = Literal["grevlex", "lex"]

DEFAULT_MAX_PAIRS = 5000
DEFAULT_MAX_DEGREE = 64


@dataclass(frozen=True)
class PolyIdeal:
    """
    Ideal generated by polynomials in nvars variables.

    Zero generators are dropped; an ideal with no generators is the zero ideal.
    """
    nvars: int
    generators: tuple[Polynomial, ...] = ()

    def __post_init__(self) -> None:
        for g in self.generators:
            if g.nvars != self.nvars:
                raise ValueError(f"generator in {g.nvars} variables, expected {self.nvars}")
        object.__setattr__(self, "generators", tuple(g for g in self.generators if not g.is_zero))

    @classmethod
    def of(cls, polys: Sequence[Polynomial]) -> "PolyIdeal":
        if not polys:
            raise ValueError("PolyIdeal.of needs at least one polynomial to fix the variables")
        return cls(polys[0].nvars, tuple(polys))

    def extended(self, extra: Iterable[Polynomial]) -> "PolyIdeal":
        return PolyIdeal(self.nvars, self.generators + tuple(extra))

    @property
    def is_zero(self) -> bool:
        return not self.generators


def _ring(nvars: int, order: MonomialOrder) -> PolyRing:
    names = ",".join(f"x{i}" for i in range(nvars))
    return ring(names, QQ, order)[0]


def _to_sympy(p: Polynomial, R: PolyRing) -> PolyElement:
    return R.from_dict({q: QQ(c.numerator, c.denominator) for q, c in p.terms})


def _from_sympy(f: PolyElement, nvars: int) -> Polynomial:
    return Polynomial(
        nvars,
        tuple((tuple(m), Fraction(int(c.numerator), int(c.denominator))) for m, c in f.items()),
    )


def spoly(f: PolyElement, g: PolyElement) -> PolyElement:
    """S-polynomial of monic f and g."""
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _update(
    basis: list[PolyElement],
    pairs: set[tuple[int, int]],
    f: PolyElement,
) -> tuple[list[PolyElement], set[tuple[int, int]]]:
    """Add f to the basis and prune pairs with the Gebauer-Moeller criteria."""
    R = f.ring
    lcm, mul, div = R.monomial_lcm, R.monomial_mul, R.monomial_div
    lmf = f.LM
    leads = [g.LM for g in basis]
    kept = {
        (i, j)
        for i, j in pairs
        if not div(lcm(leads[i], leads[j]), lmf)
        or lcm(leads[i], leads[j]) == lcm(leads[i], lmf)
        or lcm(leads[i], leads[j]) == lcm(leads[j], lmf)
    }
    by_lcm: dict[Any, list[int]] = {}
    for i in range(len(basis)):
        by_lcm.setdefault(lcm(leads[i], lmf), []).append(i)
    minimal: list[Any] = []
    for value in sorted(by_lcm, key=R.order):
        if all(not div(value, other) for other in minimal):
            minimal.append(value)
    new = set()
    for value in minimal:
        # Buchberger's product criterion: coprime leading monomials reduce to zero
        if not any(lcm(leads[i], lmf) == mul(leads[i], lmf) for i in by_lcm[value]):
            new.add((min(by_lcm[value]), len(basis)))
    return basis + [f], kept | new


def _minimalize(basis: list[PolyElement]) -> list[PolyElement]:
    if not basis:
        return []
    R = basis[0].ring
    result: list[PolyElement] = []
    for f in sorted(basis, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in result):
            result.append(f)
    return result


def _interreduce(basis: list[PolyElement]) -> list[PolyElement]:
    return [basis[i].rem(basis[:i] + basis[i + 1:]).monic() for i in range(len(basis))]


def _buchberger(
    polys: list[PolyElement],
    max_pairs: int,
    max_degree: int,
) -> list[PolyElement]:
    basis: list[PolyElement] = []
    pairs: set[tuple[int, int]] = set()
    for f in polys:
        basis, pairs = _update(basis, pairs, f.monic())
    R = polys[0].ring
    processed = 0
    while pairs:
        # normal selection strategy: smallest lcm of leading monomials
        i, j = min(pairs, key=lambda p: R.order(R.monomial_lcm(basis[p[0]].LM, basis[p[1]].LM)))
        pairs.remove((i, j))
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitError(f"Groebner basis needs more than {max_pairs} S-pairs")
        remainder = spoly(basis[i], basis[j]).rem(basis)
        if remainder:
            if max(sum(m) for m in remainder.keys()) > max_degree:
                raise ResourceLimitError(f"Groebner basis element exceeds degree {max_degree}")
            basis, pairs = _update(basis, pairs, remainder.monic())
    logger.debug(f"Buchberger: {processed} pairs, {len(basis)} elements before reduction")
    return _interreduce(_minimalize(basis))


def groebner(
    ideal: PolyIdeal,
    order: MonomialOrder = "grevlex",
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> list[Polynomial]:
    """
    Reduced Groebner basis of the ideal.

    Args:
        ideal: The ideal
        order: "grevlex" or "lex" (x0 > x1 > ...)
        max_pairs: Cap on processed S-pairs
        max_degree: Cap on the total degree of new basis elements

    Returns:
        Monic reduced basis sorted by increasing leading monomial; [] for the zero ideal

    Raises:
        ResourceLimitError: if a cap is exceeded
    """
    if order not in ("grevlex", "lex"):
        raise ValueError("order must be 'grevlex' or 'lex'")
    if ideal.is_zero:
        return []
    R = _ring(ideal.nvars, order)
    elements = _buchberger([_to_sympy(g, R) for g in ideal.generators], max_pairs, max_degree)
    elements.sort(key=lambda h: R.order(h.LM))
    return [_from_sympy(f, ideal.nvars) for f in elements]


def leading_exponents(basis: Sequence[Polynomial], order: MonomialOrder = "grevlex") -> list[Exponent]:
    """Leading exponents of the basis elements under the order."""
    if not basis:
        return []
    R = _ring(basis[0].nvars, order)
    return [tuple(_to_sympy(g, R).LM) for g in basis]


def is_groebner_basis(basis: Sequence[Polynomial], order: MonomialOrder = "grevlex") -> bool:
    """True iff every S-polynomial of the basis reduces to zero."""
    if not basis:
        return True
    R = _ring(basis[0].nvars, order)
    elements = [_to_sympy(g, R).monic() for g in basis]
    return all(
        not spoly(f, g).rem(elements) for f, g in itertools.combinations(elements, 2)
    )


def _dimension_from_leads(leads: Sequence[Exponent], nvars: int) -> int:
    """Largest set of variables containing the support of no leading monomial."""
    if any(not any(q) for q in leads):
        return -1
    supports = [frozenset(i for i, e in enumerate(q) if e) for q in leads]
    for size in range(nvars, -1, -1):
        for chosen in itertools.combinations(range(nvars), size):
            free = frozenset(chosen)
            if not any(s <= free for s in supports):
                return size
    return 0  # pragma: no cover - the empty set is always independent


def ideal_dim_affine(
    ideal: PolyIdeal,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> int:
    """Dimension of V(I) in affine space; -1 when V(I) is empty."""
    if ideal.is_zero:
        return ideal.nvars
    basis = groebner(ideal, "grevlex", max_pairs, max_degree)
    return _dimension_from_leads(leading_exponents(basis), ideal.nvars)


def _lift(p: Polynomial, extra: int) -> Polynomial:
    return Polynomial(p.nvars + extra, tuple((q + (0,) * extra, c) for q, c in p.terms))


def ideal_dim_torus(
    ideal: PolyIdeal,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> int:
    """
    Dimension of V(I) in the torus; -1 when empty.

    Localizes at the product of the coordinates with an extra variable w and
    the generator w * z_1 ... z_n - 1; the lifted variety is isomorphic to
    V(I) in the torus.
    """
    n = ideal.nvars
    if ideal.is_zero:
        return n
    saturating = Polynomial(
        n + 1,
        (((1,) * (n + 1), Fraction(1)), ((0,) * (n + 1), Fraction(-1))),
    )
    lifted = PolyIdeal(n + 1, tuple(_lift(g, 1) for g in ideal.generators) + (saturating,))
    return ideal_dim_affine(lifted, max_pairs, max_degree)


def standard_monomial_count(basis: Sequence[Polynomial], order: MonomialOrder = "grevlex") -> int | None:
    """Number of standard monomials, or None when the quotient is infinite-dimensional."""
    if not basis:
        return None
    n = basis[0].nvars
    leads = leading_exponents(basis, order)
    if any(not any(q) for q in leads):
        return 0
    bounds = []
    for i in range(n):
        pure = [q[i] for q in leads if all(e == 0 for j, e in enumerate(q) if j != i) and q[i] > 0]
        if not pure:
            return None
        bounds.append(min(pure))
    return sum(
        1
        for m in itertools.product(*(range(b) for b in bounds))
        if not any(all(a >= e for a, e in zip(m, q)) for q in leads)
    )

"""Exact graded dimensions in finite-dimensional quotients O / F_{mu+1}."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from nfw.errors import ResourceLimitError
from nfw.lattice import (
    DEFAULT_MAX_POINTS,
    FiltrationSpec,
    Grading,
    OneIndexFiltration,
    dim_graded,
    sublevel,
)
from nfw.linalg import EchelonBasis, Vector, nullspace
from nfw.polycore import Exponent, Polynomial, add_exponents
from nfw.series import MultiIndex, Window

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArtinianQuotient:
    """
    The algebra O / F_{mu+1} with its monomial basis.

    basis holds the exponents q with v_j(q) <= mu_j for some j; it is closed
    under coordinatewise decrease.
    """
    grading: Grading
    mu: MultiIndex
    basis: tuple[Exponent, ...]
    index: dict[Exponent, int] = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, g: Polynomial) -> Vector:
        """Class of g as a sparse coordinate vector; terms in F_{mu+1} vanish."""
        return {self.index[q]: c for q, c in g.terms if q in self.index}

    def in_filtration(self, q: Exponent, mu: MultiIndex) -> bool:
        return all(v >= m for v, m in zip(self.grading.values(q), mu))

    def monomials_in(self, mu: MultiIndex) -> list[int]:
        """Basis positions of the monomials lying in F_mu."""
        return [i for i, q in enumerate(self.basis) if self.in_filtration(q, mu)]


def artinian_basis(
    grading: Grading,
    mu: Sequence[int],
    max_points: int = DEFAULT_MAX_POINTS,
) -> ArtinianQuotient:
    """
    Monomial basis of O / F_{mu+1}.

    Raises:
        FiltrationError: if a normal has a zero component
    """
    key = tuple(mu)
    basis = tuple(sublevel(grading, key, max_points))
    return ArtinianQuotient(grading, key, basis, {q: i for i, q in enumerate(basis)})


def ideal_image(
    quotient: ArtinianQuotient,
    polys: Sequence[Polynomial],
    multiplier_floors: Sequence[MultiIndex] | None = None,
) -> EchelonBasis:
    """
    Span of the classes m * g_i for monomials m.

    A multiple m * g_i has a term in the basis only if m itself does, so the
    basis monomials suffice. With multiplier_floors, only m with v(m) >= floor_i
    are used for g_i.
    """
    span = EchelonBasis(quotient.dim)
    for i, g in enumerate(polys):
        floor = multiplier_floors[i] if multiplier_floors is not None else None
        for a in quotient.basis:
            if floor is not None and not quotient.in_filtration(a, floor):
                continue
            image = {}
            for q, c in g.terms:
                target = quotient.index.get(add_exponents(a, q))
                if target is not None:
                    image[target] = c
            if image:
                span.add(image)
    return span


def _units(positions: Sequence[int]) -> list[Vector]:
    return [{i: Fraction(1)} for i in positions]


def induced_dim_graded(grading: Grading, mu: Sequence[int], polys: Sequence[Polynomial]) -> int:
    """dim F_mu O_Y / F_{mu+1} O_Y for Y defined by polys, under any grading."""
    quotient = artinian_basis(grading, mu)
    ideal = ideal_image(quotient, polys)
    combined = ideal.copy()
    combined.extend(_units(quotient.monomials_in(quotient.mu)))
    return combined.rank - ideal.rank


def bar_dim_graded(
    grading: Grading,
    mu: Sequence[int],
    polys: Sequence[Polynomial],
    nus: Sequence[Sequence[int]],
) -> int:
    """dim F_mu / (F_{mu+1} + g_1 F_{mu-nu_1} + ... + g_k F_{mu-nu_k})."""
    quotient = artinian_basis(grading, mu)
    floors = [tuple(m - v for m, v in zip(quotient.mu, nu)) for nu in nus]
    relations = ideal_image(quotient, polys, floors)
    return len(quotient.monomials_in(quotient.mu)) - relations.rank


def induced_dim(spec: FiltrationSpec, mu: Sequence[int], polys: Sequence[Polynomial]) -> int:
    """Graded dimension of the induced multi-index filtration on O_Y."""
    return induced_dim_graded(spec, mu, polys)


def bar_dim(
    spec: FiltrationSpec,
    mu: Sequence[int],
    polys: Sequence[Polynomial],
    nus: Sequence[Sequence[int]],
) -> int:
    return bar_dim_graded(spec, mu, polys, nus)


def induced_dim_one_index(spec: FiltrationSpec, level: int, polys: Sequence[Polynomial]) -> int:
    return induced_dim_graded(OneIndexFiltration(spec), (level,), polys)


def bar_dim_one_index(
    spec: FiltrationSpec,
    level: int,
    polys: Sequence[Polynomial],
    rhos: Sequence[int],
) -> int:
    """dim F_l / (F_{l+1} + g_1 F_{l-rho_1} + ...) for the one-index filtration."""
    return bar_dim_graded(OneIndexFiltration(spec), (level,), polys, [(r,) for r in rhos])


def thm14_equal(spec: FiltrationSpec, mu: Sequence[int], polys: Sequence[Polynomial]) -> bool:
    """
    Whether F_mu equals the intersection of the F_{mu_l e_l} on O_Y.

    Both sides contain the image of F_{mu+1}, so the comparison is made in
    O / (F_{mu+1} + I). The intersection's dimension comes from the sum of the
    orthogonal complements.
    """
    key = tuple(mu)
    if any(m < 0 for m in key):
        raise ValueError("thm14_equal needs mu in N^r")
    quotient = artinian_basis(spec, key)
    ideal = ideal_image(quotient, polys)

    def with_ideal(target: MultiIndex) -> EchelonBasis:
        space = ideal.copy()
        space.extend(_units(quotient.monomials_in(target)))
        return space

    whole = with_ideal(key)
    perps = EchelonBasis(quotient.dim)
    for l in range(spec.r):
        single = tuple(key[l] if j == l else 0 for j in range(spec.r))
        perps.extend(nullspace(with_ideal(single)))
    intersection = quotient.dim - perps.rank
    if intersection != whole.rank:
        logger.info(f"F_mu differs from the intersection at mu={key}: {whole.rank} < {intersection}")
    return intersection == whole.rank


def _pure_power(n: int, i: int, e: int) -> Exponent:
    return tuple(e if j == i else 0 for j in range(n))


def _least_power(quotient: ArtinianQuotient, ideal: EchelonBasis, i: int, c: int) -> int | None:
    """Least e <= c with z_i^e in the ideal image, if any."""
    n = len(quotient.basis[0])
    for e in range(c + 1):
        if ideal.contains({quotient.index[_pure_power(n, i, e)]: Fraction(1)}):
            return e
    return None


def _standard_grading(n: int) -> FiltrationSpec:
    return FiltrationSpec(normals=((1,) * n,), offsets=(1,), m=1, n=n)


def _cut_depths(max_depth: int) -> list[int]:
    depths = []
    c = 2
    while c < max_depth:
        depths.append(c)
        c *= 2
    depths.append(max_depth)
    return depths


def quotient_total_dim(polys: Sequence[Polynomial], max_depth: int = 40) -> int:
    """
    dim O / (g_1, ..., g_n) for a zero-dimensional complete intersection at 0.

    Works in O / m^{c+1} for growing c. If z_i^{N_i} lies in the ideal there
    and D = sum(N_i - 1) + 1 <= c, then m^D lies in the ideal itself, and the
    dimension is dim(O / m^{c+1}) - dim(ideal image).

    Raises:
        ResourceLimitError: if no certificate appears up to max_depth, e.g. when
            the dimension is infinite
    """
    if not polys:
        raise ValueError("need at least one polynomial")
    n = polys[0].nvars
    grading = _standard_grading(n)
    for c in _cut_depths(max_depth):
        quotient = artinian_basis(grading, (c,))
        ideal = ideal_image(quotient, polys)
        powers = [_least_power(quotient, ideal, i, c) for i in range(n)]
        if None not in powers:
            depth = sum(max(e - 1, 0) for e in powers if e is not None) + 1
            if depth <= c:
                result = quotient.dim - ideal.rank
                logger.debug(f"quotient dimension {result} certified at cut {c} (pure powers {powers})")
                return result
        logger.debug(f"no pure-power certificate at cut {c}")
    raise ResourceLimitError(f"quotient dimension possibly infinite: no certificate up to depth {max_depth}")


@dataclass(frozen=True)
class GradedRow:
    mu: MultiIndex
    ambient: int
    induced: int
    bar: int

    def to_list(self) -> list[Any]:
        return [list(self.mu), self.ambient, self.induced, self.bar]


def graded_report(
    spec: FiltrationSpec,
    window: Window,
    polys: Sequence[Polynomial],
    nus: Sequence[Sequence[int]],
) -> list[GradedRow]:
    """Ambient, induced and bar graded dimensions at every mu of the window."""
    rows = []
    for mu in window.points():
        rows.append(
            GradedRow(
                mu=mu,
                ambient=dim_graded(spec, mu),
                induced=induced_dim(spec, mu, polys),
                bar=bar_dim(spec, mu, polys, nus),
            )
        )
    return rows

"""Direct lattice-point counts for the multi-index and one-index Newton filtrations."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Protocol

from nfw.errors import FiltrationError, ResourceLimitError
from nfw.linalg import dot
from nfw.newton import Normal
from nfw.polycore import Exponent, Polynomial
from nfw.series import (
    MultiIndex,
    TruncatedSeries,
    Window,
    ambient_poincare,
    diagonal,
    first_discrepancy,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 200_000


def _below(
    normal: Normal,
    bound: int,
    n: int,
    found: set[Exponent],
    max_points: int,
) -> None:
    prefix = [0] * n

    def walk(i: int, used: int) -> None:
        if i == n:
            found.add(tuple(prefix))
            if len(found) > max_points:
                raise ResourceLimitError(f"lattice enumeration exceeds {max_points} points")
            return
        k = 0
        while used + k * normal[i] <= bound:
            prefix[i] = k
            walk(i + 1, used + k * normal[i])
            k += 1
        prefix[i] = 0

    if bound >= 0:
        walk(0, 0)


def enumerate_below(
    normals: Sequence[Normal],
    bounds: Sequence[int],
    n: int,
    max_points: int = DEFAULT_MAX_POINTS,
) -> list[Exponent]:
    """
    Points q in N^n with <p_j, q> <= b_j for at least one j, sorted.

    Every normal must have positive components so that each piece is finite.

    Raises:
        ResourceLimitError: if more than max_points points are found
    """
    found: set[Exponent] = set()
    for p, b in zip(normals, bounds):
        if any(x <= 0 for x in p):
            raise FiltrationError(f"normal {tuple(p)} has a zero component; the count is infinite")
        _below(p, b, n, found, max_points)
    return sorted(found)


class Grading(Protocol):
    """A valuation vector on monomials whose sublevel sets are finite unions of simplices."""

    @property
    def n(self) -> int: ...

    @property
    def normals(self) -> tuple[Normal, ...]: ...

    @property
    def rank(self) -> int: ...

    def values(self, q: Exponent) -> tuple[int, ...]: ...

    def cover(self, mu: MultiIndex) -> list[int]: ...


@dataclass(frozen=True)
class FiltrationSpec:
    """
    Multi-index Newton filtration: F_mu is spanned by z^q with <p_j, q> >= mu_j for all j.

    Args:
        normals: Facet normals p_1..p_r, strictly positive
        offsets: Facet offsets nu_1..nu_r used by the one-index function psi
        m: Integrality constant M
        n: Number of variables
    """
    normals: tuple[Normal, ...]
    offsets: tuple[int, ...]
    m: int
    n: int

    def __post_init__(self) -> None:
        if not self.normals:
            raise ValueError("a filtration needs at least one normal")
        if len(self.offsets) != len(self.normals):
            raise ValueError("offsets and normals must have the same length")
        if self.m < 1:
            raise ValueError("M must be positive")
        for p in self.normals:
            if len(p) != self.n:
                raise ValueError(f"normal {p} does not have {self.n} entries")
            if any(x <= 0 for x in p):
                raise FiltrationError(
                    f"normal {p} has a zero component; graded pieces would be infinite"
                )
        if any(nu < 1 for nu in self.offsets):
            raise ValueError("offsets must be positive")

    @property
    def rank(self) -> int:
        return len(self.normals)

    @property
    def r(self) -> int:
        return len(self.normals)

    def values(self, q: Exponent) -> tuple[int, ...]:
        return tuple(int(dot(p, q)) for p in self.normals)

    def cover(self, mu: MultiIndex) -> list[int]:
        return list(mu)

    def contains(self, q: Exponent, mu: MultiIndex) -> bool:
        """True iff z^q lies in F_mu."""
        return all(v >= m for v, m in zip(self.values(q), mu))

    def psi(self, q: Exponent) -> int:
        """M * min_j <p_j, q> / nu_j."""
        value = self.m * min(Fraction(v, nu) for v, nu in zip(self.values(q), self.offsets))
        if value.denominator != 1:
            raise FiltrationError(f"psi({q}) = {value} is not integral; M = {self.m} is too small")
        return int(value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "normals": [list(p) for p in self.normals],
            "offsets": list(self.offsets),
            "M": self.m,
            "n": self.n,
        }


@dataclass(frozen=True)
class OneIndexFiltration:
    """The one-index filtration by psi, seen as a rank-one grading."""
    spec: FiltrationSpec

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def normals(self) -> tuple[Normal, ...]:
        return self.spec.normals

    @property
    def rank(self) -> int:
        return 1

    def values(self, q: Exponent) -> tuple[int, ...]:
        return (self.spec.psi(q),)

    def cover(self, mu: MultiIndex) -> list[int]:
        # psi(q) <= l iff <p_j, q> <= l * nu_j / M for some j
        (level,) = mu
        return [(level * nu) // self.spec.m for nu in self.spec.offsets]


def sublevel(grading: Grading, mu: MultiIndex, max_points: int = DEFAULT_MAX_POINTS) -> list[Exponent]:
    """Exponents q with v_j(q) <= mu_j for some j, i.e. the monomials outside F_{mu+1}."""
    return enumerate_below(grading.normals, grading.cover(mu), grading.n, max_points)


def dim_graded(grading: Grading, mu: MultiIndex, max_points: int = DEFAULT_MAX_POINTS) -> int:
    """dim F_mu / F_{mu+1} for the given grading."""
    return sum(
        1
        for q in sublevel(grading, mu, max_points)
        if all(v >= m for v, m in zip(grading.values(q), mu))
    )


def dim_graded_ambient(spec: FiltrationSpec, mu: Sequence[int]) -> int:
    """#{q : <p_j, q> >= mu_j for all j and <p_j, q> <= mu_j for some j}."""
    return dim_graded(spec, tuple(mu))


def l_direct(spec: FiltrationSpec, window: Window, max_points: int = DEFAULT_MAX_POINTS) -> TruncatedSeries:
    """L(t) = sum dim F_mu / F_{mu+1} t^mu on the window."""
    if window.arity != spec.r:
        raise ValueError(f"window arity {window.arity} does not match r = {spec.r}")
    coefficients = {mu: dim_graded(spec, mu, max_points) for mu in window.points()}
    return TruncatedSeries(window, coefficients)


def dim_one_index(spec: FiltrationSpec, level: int) -> int:
    """#{q in N^n : psi(q) = level}."""
    return dim_graded(OneIndexFiltration(spec), (level,))


def p_hat_direct(spec: FiltrationSpec, window: Window) -> TruncatedSeries:
    """Poincare series of the one-index filtration, sum_l #{psi = l} tau^l."""
    grading = OneIndexFiltration(spec)
    coefficients = {
        mu: dim_graded(grading, mu) for mu in window.points() if mu[0] >= 0
    }
    return TruncatedSeries(window, coefficients, floor=0)


def m_l_count(spec: FiltrationSpec, level: int) -> int:
    """#(M_l minus M_{l+1}) = #{q : min_j <p_j, q> = level}."""
    if level < 0:
        return 0
    points = enumerate_below(spec.normals, [level] * spec.r, spec.n)
    return sum(1 for q in points if min(spec.values(q)) == level)


def rho(spec: FiltrationSpec, g: Polynomial) -> int:
    """Largest rho with g in the one-index filtration piece of level rho."""
    if g.is_zero:
        raise ValueError("rho is undefined for the zero polynomial")
    return min(spec.psi(q) for q in g.support())


def ambient_columns(spec: FiltrationSpec) -> list[tuple[int, ...]]:
    """Columns p^l = (p_{1,l}, ..., p_{r,l}) for l = 1..n."""
    return [tuple(p[l] for p in spec.normals) for l in range(spec.n)]


@dataclass(frozen=True)
class SeriesComparison:
    """Coefficientwise comparison of two one-variable series on their common window."""
    equal: bool
    first_mismatch: tuple[int, int, int] | None

    def to_dict(self) -> dict[str, Any]:
        return {"equal": self.equal, "first_mismatch": list(self.first_mismatch) if self.first_mismatch else None}


@dataclass(frozen=True)
class Lemma33Report:
    """
    Three one-variable series: P-hat from psi counts, the M_l level counts,
    and the diagonal coefficients of the ambient Poincare series.
    """
    psi_counts: TruncatedSeries
    level_counts: TruncatedSeries
    diagonal: TruncatedSeries
    psi_vs_levels: SeriesComparison
    psi_vs_diagonal: SeriesComparison
    offsets_equal_m: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "psi_counts": self.psi_counts.to_list(),
            "level_counts": self.level_counts.to_list(),
            "diagonal": self.diagonal.to_list(),
            "psi_vs_levels": self.psi_vs_levels.to_dict(),
            "psi_vs_diagonal": self.psi_vs_diagonal.to_dict(),
            "offsets_equal_M": self.offsets_equal_m,
        }


def _compare(a: TruncatedSeries, b: TruncatedSeries) -> SeriesComparison:
    mismatch = first_discrepancy(a, b)
    flat = (mismatch[0][0], mismatch[1], mismatch[2]) if mismatch else None
    return SeriesComparison(mismatch is None, flat)


def lemma33_report(spec: FiltrationSpec, window: Window) -> Lemma33Report:
    """
    Compare the one-index Poincare series with the level counts and with the
    diagonal of the ambient Poincare series. Reports, never asserts.
    """
    if window.arity != 1:
        raise ValueError("lemma33_report takes a one-variable window")
    lo, hi = max(window.lo[0], 0), window.hi[0]
    window = Window((lo,), (hi,))
    psi_counts = p_hat_direct(spec, window)
    level_counts = TruncatedSeries(
        window, {(l,): m_l_count(spec, l) for l in range(lo, hi + 1)}, floor=0
    )
    ambient = ambient_poincare(ambient_columns(spec), Window.cube(spec.r, lo, hi))
    diag = diagonal(ambient)
    report = Lemma33Report(
        psi_counts=psi_counts,
        level_counts=level_counts,
        diagonal=diag,
        psi_vs_levels=_compare(psi_counts, level_counts),
        psi_vs_diagonal=_compare(psi_counts, diag),
        offsets_equal_m=all(nu == spec.m for nu in spec.offsets),
    )
    logger.info(
        f"level-count comparison: psi/levels equal={report.psi_vs_levels.equal}, "
        f"psi/diagonal equal={report.psi_vs_diagonal.equal}"
    )
    return report

"""Euler-characteristic formula for L(t) from the cones of a simplicial fan."""

import csv
import itertools
import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

from nfw.errors import ResourceLimitError
from nfw.fan import Cone, SimplicialFan
from nfw.linalg import dot
from nfw.newton import Normal
from nfw.series import MultiIndex, TruncatedSeries, Window

logger = logging.getLogger(__name__)

# Index pairs (I^1, I^2) share the label representation of fan cones
IndexPair = Cone


def index_pair(normals: Sequence[Normal], mu: Sequence[int], q: Sequence[int]) -> IndexPair:
    """I_{mu,q}: coordinates with q_i >= 0 and facets with <p_j, q> >= mu_j (0-based)."""
    return IndexPair(
        coordinates=frozenset(i for i, x in enumerate(q) if x >= 0),
        facets=frozenset(j for j, p in enumerate(normals) if dot(p, q) >= mu[j]),
    )


def _meet(a: IndexPair, b: IndexPair) -> IndexPair:
    return IndexPair(a.coordinates & b.coordinates, a.facets & b.facets)


def _within(a: IndexPair, b: IndexPair) -> bool:
    return a.coordinates <= b.coordinates and a.facets <= b.facets


class ChiTable:
    """
    chi_I = sum over nonempty sets L of maximal cones of (-1)^{|L|-1} [meet of J_L within I].

    Meets are taken componentwise on the label pairs. The signed count of each
    distinct meet is computed once per fan.
    """

    def __init__(self, fan: SimplicialFan):
        self.fan = fan
        weights: Counter[IndexPair] = Counter()
        for label in fan.maximal_labels:
            update: Counter[IndexPair] = Counter({label: 1})
            for meet, w in weights.items():
                update[_meet(meet, label)] -= w
            weights.update(update)
        self.weights = {pair: w for pair, w in weights.items() if w}
        self._cache: dict[IndexPair, int] = {}
        logger.debug(f"chi table: {len(self.weights)} distinct cone meets")

    def chi(self, pair: IndexPair) -> int:
        cached = self._cache.get(pair)
        if cached is None:
            cached = sum(w for meet, w in self.weights.items() if _within(meet, pair))
            self._cache[pair] = cached
        return cached


def chi_i(fan: SimplicialFan, pair: IndexPair) -> int:
    return ChiTable(fan).chi(pair)


def chi_cech(fan: SimplicialFan, pair: IndexPair, max_cones: int = 16) -> int:
    """
    chi_I from the charts: sum over nonempty sets S of maximal cones of
    (-1)^{|S|-1} [the labels of the cone shared by S lie within I].

    Exponential in the number of maximal cones; a cross-check for ChiTable.
    """
    cones = fan.maximal_cones
    if len(cones) > max_cones:
        raise ResourceLimitError(f"{len(cones)} maximal cones exceed the chart limit {max_cones}")
    total = 0
    for size in range(1, len(cones) + 1):
        sign = 1 if size % 2 else -1
        for chosen in itertools.combinations(cones, size):
            shared = frozenset.intersection(*chosen)
            if _within(fan.labels(shared), pair):
                total += sign
    return total


def _shell(n: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Points of [-radius, radius]^n with max |q_i| == radius."""
    if radius == 0:
        yield (0,) * n
        return
    for q in itertools.product(range(-radius, radius + 1), repeat=n):
        if max(abs(x) for x in q) == radius:
            yield q


@dataclass(frozen=True)
class ToricTerm:
    """One (I, J) class at a given mu: n points q with I_{mu,q} = I and I_{mu+1,q} = J."""
    mu: MultiIndex
    upper: IndexPair
    lower: IndexPair
    count: int
    chi_upper: int
    chi_lower: int

    @property
    def weight(self) -> int:
        return self.count * (self.chi_upper - self.chi_lower)


class ToricCounter:
    """
    Evaluates sum_q (chi(I_{mu,q}) - chi(I_{mu+1,q})) over a growing box of q.

    The box [-R, R]^n is accepted once the next shell contributes nothing.
    """

    def __init__(self, normals: Sequence[Normal], fan: SimplicialFan, max_radius: int = 48):
        self.normals = [tuple(p) for p in normals]
        self.fan = fan
        self.table = ChiTable(fan)
        self.max_radius = max_radius

    def _pairs(self, mu: MultiIndex, q: tuple[int, ...]) -> tuple[IndexPair, IndexPair]:
        upper = index_pair(self.normals, mu, q)
        lower = index_pair(self.normals, tuple(m + 1 for m in mu), q)
        return upper, lower

    def counts(self, mu: Sequence[int]) -> list[ToricTerm]:
        """n_{I,J,mu} for every class with chi_I != chi_J.

        Raises:
            ResourceLimitError: if contributions persist up to max_radius
        """
        key = tuple(mu)
        tally: Counter[tuple[IndexPair, IndexPair]] = Counter()
        radius = max(1, max((abs(m) for m in key), default=0)) + 1
        for r in range(radius + 1):
            for q in _shell(self.fan.n, r):
                self._record(key, q, tally)
        while True:
            if radius >= self.max_radius:
                raise ResourceLimitError(
                    f"toric sum at mu={key} does not settle within radius {self.max_radius}"
                )
            radius += 1
            added = 0
            for q in _shell(self.fan.n, radius):
                added += self._record(key, q, tally)
            if not added:
                break
        logger.debug(f"toric sum at mu={key} settled at radius {radius}")
        terms = []
        for (upper, lower), count in sorted(tally.items(), key=lambda item: _pair_key(item[0])):
            terms.append(
                ToricTerm(key, upper, lower, count, self.table.chi(upper), self.table.chi(lower))
            )
        return terms

    def _record(
        self,
        mu: MultiIndex,
        q: tuple[int, ...],
        tally: Counter[tuple[IndexPair, IndexPair]],
    ) -> int:
        upper, lower = self._pairs(mu, q)
        if self.table.chi(upper) == self.table.chi(lower):
            return 0
        tally[(upper, lower)] += 1
        return 1

    def coefficient(self, mu: Sequence[int]) -> int:
        return sum(term.weight for term in self.counts(mu))


def _pair_key(pairs: tuple[IndexPair, IndexPair]) -> tuple[list[list[int]], list[list[int]]]:
    return pairs[0].to_list(), pairs[1].to_list()


def n_ij_mu(
    normals: Sequence[Normal],
    fan: SimplicialFan,
    mu: Sequence[int],
    max_radius: int = 48,
) -> dict[tuple[IndexPair, IndexPair], int]:
    """Counts n_{I,J,mu} of q with I_{mu,q} = I and I_{mu+1,q} = J, for chi_I != chi_J."""
    terms = ToricCounter(normals, fan, max_radius).counts(mu)
    return {(t.upper, t.lower): t.count for t in terms}


def l_toric(
    normals: Sequence[Normal],
    fan: SimplicialFan,
    window: Window,
    max_radius: int = 48,
    csv_path: Path | None = None,
) -> TruncatedSeries:
    """
    L(t) = sum_mu sum_{(I,J)} n_{I,J,mu} (chi_I - chi_J) t^mu on the window.

    Args:
        normals: Facet normals p_1..p_r
        fan: Simplicial fan on e_1..e_n, p_1..p_r
        window: Window of mu values
        max_radius: Largest half-width of the q box
        csv_path: Optional CSV dump of every (mu, I, J, n, chi_I, chi_J) row
    """
    counter = ToricCounter(normals, fan, max_radius)
    coefficients = {}
    rows: list[ToricTerm] = []
    for mu in window.points():
        terms = counter.counts(mu)
        rows.extend(terms)
        value = sum(t.weight for t in terms)
        if value:
            coefficients[mu] = value
    if csv_path is not None:
        write_toric_csv(csv_path, rows)
    return TruncatedSeries(window, coefficients)


def write_toric_csv(path: Path, rows: Sequence[ToricTerm]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["mu", "I_coordinates", "I_facets", "J_coordinates", "J_facets", "n", "chi_I", "chi_J"])
        for row in rows:
            writer.writerow([
                " ".join(str(m) for m in row.mu),
                " ".join(str(i) for i in sorted(row.upper.coordinates)),
                " ".join(str(j) for j in sorted(row.upper.facets)),
                " ".join(str(i) for i in sorted(row.lower.coordinates)),
                " ".join(str(j) for j in sorted(row.lower.facets)),
                row.count,
                row.chi_upper,
                row.chi_lower,
            ])
    logger.info(f"wrote {len(rows)} toric rows to {path}")

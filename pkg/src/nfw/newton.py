"""Newton polyhedra, compact facets, initial parts and polyhedral predicates."""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from nfw.linalg import affine_dimension, determinant, dot
from nfw.polycore import Exponent, Polynomial, product_of
from nfw.polyhedra import (
    HalfSpace,
    affine_hull,
    polyhedron_facets,
    polytope_facets,
    pulling_triangulation,
    vertex_indices,
)

logger = logging.getLogger(__name__)

Normal = tuple[int, ...]


@dataclass(frozen=True)
class Facet:
    """
    A facet {q : <normal, q> = offset} of a Newton polyhedron.

    Args:
        normal: Primitive inward normal
        offset: min of <normal, q> over the support
        points: Support points lying on the facet
        recession: Coordinates i such that the facet is invariant under adding e_i
    """
    normal: Normal
    offset: int
    points: frozenset[Exponent]
    recession: frozenset[int] = frozenset()

    @property
    def compact(self) -> bool:
        return not self.recession


@dataclass(frozen=True)
class NewtonPolyhedron:
    """
    Newton polyhedron conv(S) + R_+^n of a germ, or conv(S) for a Laurent polynomial.

    facets holds the compact facets p_1..p_r sorted lexicographically by normal;
    noncompact_facets the remaining ones (germ mode only).
    """
    n: int
    support: frozenset[Exponent]
    facets: tuple[Facet, ...]
    noncompact_facets: tuple[Facet, ...]
    vertices: frozenset[Exponent]
    dimension: int
    laurent: bool = False

    @property
    def r(self) -> int:
        return len(self.facets)

    @property
    def normals(self) -> tuple[Normal, ...]:
        return tuple(f.normal for f in self.facets)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(f.offset for f in self.facets)

    def face(self, direction: Sequence[int | Fraction]) -> frozenset[Exponent]:
        """Support points minimizing <direction, q>."""
        values = {q: dot(direction, q) for q in self.support}
        least = min(values.values())
        return frozenset(q for q, v in values.items() if v == least)

    def face_dimension(self, direction: Sequence[int | Fraction]) -> int:
        """Dimension of the face of conv(support) in the given direction."""
        return affine_dimension(sorted(self.face(direction)))

    def compact_faces(self) -> list[frozenset[Exponent]]:
        """
        Every nonempty compact face, as the set of support points it contains.

        Faces are intersections of facets; a face is compact when no coordinate
        direction recedes in it.
        """
        all_facets = list(self.facets) + list(self.noncompact_facets)
        seen: set[tuple[frozenset[Exponent], frozenset[int]]] = set()
        frontier = [(f.points, f.recession) for f in all_facets]
        while frontier:
            face = frontier.pop()
            if face in seen or not face[0]:
                continue
            seen.add(face)
            for f in all_facets:
                meet = (face[0] & f.points, face[1] & f.recession)
                if meet not in seen and meet[0]:
                    frontier.append(meet)
        compact = {points for points, recession in seen if not recession}
        if self.laurent:
            compact.add(self.support)
        return sorted(compact, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class NuMatrix:
    """Matrix nu[i][l] = min over supp(g_i) of <p_l, q>."""
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise ValueError("NuMatrix rows must have equal length")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def r(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def total(self, indices: Iterable[int] | None = None) -> tuple[int, ...]:
        """Sum of the selected rows (all rows by default)."""
        chosen = range(self.k) if indices is None else indices
        total = [0] * self.r
        for i in chosen:
            total = [a + b for a, b in zip(total, self.rows[i])]
        return tuple(total)

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def _facet_from_halfspace(half: HalfSpace, points: Sequence[Exponent]) -> Facet:
    return Facet(
        normal=half.normal,
        offset=half.offset,
        points=frozenset(points[i] for i in half.points),
        recession=half.rays,
    )


def newton_polyhedron(support: Iterable[Exponent], n: int | None = None) -> NewtonPolyhedron:
    """
    Newton polyhedron conv(S) + R_+^n of a nonempty support in N^n.

    Args:
        support: Exponents of the monomials
        n: Ambient dimension (taken from the exponents when omitted)

    Returns:
        NewtonPolyhedron with compact facets sorted by normal

    Raises:
        ValueError: if the support is empty or has negative entries
    """
    points = sorted(set(support))
    if not points:
        raise ValueError("Newton polyhedron of an empty support")
    n = len(points[0]) if n is None else n
    if any(len(q) != n for q in points):
        raise ValueError(f"support points must have {n} entries")
    if any(e < 0 for q in points for e in q):
        raise ValueError("germ supports must have nonnegative exponents")

    units = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    halves = polyhedron_facets(points, units)
    facets = [_facet_from_halfspace(h, points) for h in halves]
    compact = sorted((f for f in facets if f.compact), key=lambda f: f.normal)
    noncompact = sorted((f for f in facets if not f.compact), key=lambda f: f.normal)
    vertices = frozenset(points[i] for i in vertex_indices(points, halves, n))
    logger.debug(f"Newton polyhedron of {len(points)} points: {len(compact)} compact facets")
    return NewtonPolyhedron(
        n=n,
        support=frozenset(points),
        facets=tuple(compact),
        noncompact_facets=tuple(noncompact),
        vertices=vertices,
        dimension=n,
    )


def newton_polytope(support: Iterable[Exponent], n: int | None = None) -> NewtonPolyhedron:
    """
    Newton polytope conv(S) of a Laurent polynomial.

    Every facet is compact; normals lie in the direction space of the affine hull.
    """
    points = sorted(set(support))
    if not points:
        raise ValueError("Newton polytope of an empty support")
    n = len(points[0]) if n is None else n
    halves, hull = polytope_facets(points)
    facets = sorted((_facet_from_halfspace(h, points) for h in halves), key=lambda f: f.normal)
    vertices = frozenset(points[i] for i in vertex_indices(points, halves, hull.dimension))
    return NewtonPolyhedron(
        n=n,
        support=frozenset(points),
        facets=tuple(facets),
        noncompact_facets=(),
        vertices=vertices,
        dimension=hull.dimension,
        laurent=True,
    )


def newton_polyhedron_of(polys: Sequence[Polynomial], laurent: bool = False) -> NewtonPolyhedron:
    """Newton polyhedron (or polytope) of the product g_1 ... g_k."""
    if not polys:
        raise ValueError("need at least one polynomial")
    n = polys[0].nvars
    product = product_of(polys, n)
    if product.is_zero:
        raise ValueError("Newton polyhedron of the zero polynomial")
    build = newton_polytope if laurent else newton_polyhedron
    return build(product.support(), n)


def minkowski_sum(first: NewtonPolyhedron, second: NewtonPolyhedron) -> NewtonPolyhedron:
    """Minkowski sum of two Newton polytopes (or polyhedra, same mode)."""
    if first.n != second.n or first.laurent != second.laurent:
        raise ValueError("Minkowski sum needs polyhedra of the same kind and dimension")
    sums = {tuple(a + b for a, b in zip(p, q)) for p in first.vertices for q in second.vertices}
    build = newton_polytope if first.laurent else newton_polyhedron
    return build(sums, first.n)


def is_convenient(polys: Sequence[Polynomial]) -> bool:
    """True iff every polynomial has a term z_j^l (l >= 0) for every j."""
    for g in polys:
        support = g.support()
        for j in range(g.nvars):
            if not any(all(e == 0 for i, e in enumerate(q) if i != j) for q in support):
                return False
    return True


def nu_row(g: Polynomial, normals: Sequence[Normal]) -> tuple[int, ...]:
    if g.is_zero:
        raise ValueError("nu is undefined for the zero polynomial")
    return tuple(min(dot(p, q) for q in g.support()) for p in normals)


def nu_matrix(polys: Sequence[Polynomial], polyhedron: NewtonPolyhedron) -> NuMatrix:
    """nu[i][l] = min over supp(g_i) of <p_l, q> for the compact facets of polyhedron."""
    return NuMatrix(tuple(nu_row(g, polyhedron.normals) for g in polys))


def _resolve_offsets(
    g: Polynomial,
    polyhedron: NewtonPolyhedron,
    offsets: Sequence[int | Fraction] | None,
) -> Sequence[int | Fraction]:
    if offsets is not None:
        return offsets
    if g.is_zero:
        return [0] * polyhedron.r
    return nu_row(g, polyhedron.normals)


def initial_part(
    g: Polynomial,
    facets: Iterable[int],
    polyhedron: NewtonPolyhedron,
    offsets: Sequence[int | Fraction] | None = None,
) -> Polynomial:
    """
    Terms of g with <p_j, q> = offset_j for every j in facets (0-based indices).

    Offsets default to the nu row of g itself.
    """
    return initial_part_cone(g, (), facets, polyhedron, offsets)


def initial_part_cone(
    g: Polynomial,
    zero_coordinates: Iterable[int],
    facets: Iterable[int],
    polyhedron: NewtonPolyhedron,
    offsets: Sequence[int | Fraction] | None = None,
) -> Polynomial:
    """
    Initial part of g on the cone spanned by e_i (i in zero_coordinates) and p_j (j in facets).

    Keeps the terms with q_i = 0 for the coordinate generators and
    <p_j, q> = offset_j for the facet generators.
    """
    zeros = list(zero_coordinates)
    chosen = list(facets)
    values = _resolve_offsets(g, polyhedron, offsets)
    normals = polyhedron.normals
    kept = tuple(
        (q, c)
        for q, c in g.terms
        if all(q[i] == 0 for i in zeros) and all(dot(normals[j], q) == values[j] for j in chosen)
    )
    return Polynomial(g.nvars, kept)


def bistellar_witnesses(polyhedron: NewtonPolyhedron) -> list[tuple[int, int]]:
    """Pairs of compact facets with empty intersection."""
    return [
        (a, b)
        for a, b in itertools.combinations(range(polyhedron.r), 2)
        if not polyhedron.facets[a].points & polyhedron.facets[b].points
    ]


def is_bistellar(polyhedron: NewtonPolyhedron) -> bool:
    """True iff every two compact facets intersect."""
    return not bistellar_witnesses(polyhedron)


def is_full(polyhedron: NewtonPolyhedron) -> bool:
    return polyhedron.dimension == polyhedron.n


def edge_normals(polyhedron: NewtonPolyhedron) -> frozenset[Normal]:
    """Primitive generators of the one-dimensional cones of the dual fan."""
    return frozenset(f.normal for f in polyhedron.facets + polyhedron.noncompact_facets)


def edge_sets_equal(polyhedra: Sequence[NewtonPolyhedron]) -> bool:
    """True iff all polyhedra have the same set of dual-fan edges."""
    edges = {edge_normals(p) for p in polyhedra}
    return len(edges) <= 1


def remark_k2_condition(first: NewtonPolyhedron, second: NewtonPolyhedron) -> bool:
    """
    The k=2 condition: n >= 4, and for every facet normal p of the Minkowski sum
    the faces of both summands in direction p have dimension >= 2.
    """
    if first.n < 4:
        return False
    total = minkowski_sum(first, second)
    for facet in total.facets:
        if first.face_dimension(facet.normal) < 2 or second.face_dimension(facet.normal) < 2:
            logger.info(f"k=2 condition fails at normal {facet.normal}")
            return False
    return True


def weak_fullness_condition(polyhedra: Sequence[NewtonPolyhedron]) -> bool:
    """dim(D_1+...+D_j) = dim D_j for 2 <= j <= k, and dim D_j > j (1-based j)."""
    running = polyhedra[0]
    for j, current in enumerate(polyhedra, start=1):
        if current.dimension <= j:
            return False
        if j >= 2:
            running = minkowski_sum(running, current)
            if running.dimension != current.dimension:
                return False
    return True


def _normalized_volume_below(points: Sequence[Exponent]) -> int:
    """d! times the volume of R_+^d minus the Newton polyhedron of a convenient point set."""
    polyhedron = newton_polyhedron(points)
    total = Fraction(0)
    for facet in polyhedron.facets:
        corners = sorted(facet.points & polyhedron.vertices)
        for simplex in pulling_triangulation(corners):
            total += abs(determinant([corners[i] for i in sorted(simplex)]))
    return int(total)


def newton_number(polyhedron: NewtonPolyhedron) -> int:
    """
    Kushnirenko's Newton number of a convenient Newton polyhedron.

    Alternating sum of k! V_k over k = n..1 plus (-1)^n, where V_k is the total
    k-dimensional volume under the Newton boundary in the coordinate k-planes.
    """
    if polyhedron.laurent:
        raise ValueError("Newton number is defined for germ polyhedra")
    n = polyhedron.n
    result = (-1) ** n
    for k in range(1, n + 1):
        volume = 0
        for coords in itertools.combinations(range(n), k):
            outside = [i for i in range(n) if i not in coords]
            section = [
                tuple(q[i] for i in coords)
                for q in polyhedron.support
                if all(q[i] == 0 for i in outside)
            ]
            section = [q for q in section if any(q)]
            if len({i for q in section for i, e in enumerate(q) if e and sum(q) == e}) < k:
                raise ValueError("Newton number needs a convenient polyhedron")
            volume += _normalized_volume_below(section)
        result += (-1) ** (n - k) * volume
    return result


def hull_dimension(points: Iterable[Exponent]) -> int:
    return affine_hull(sorted(set(points))).dimension

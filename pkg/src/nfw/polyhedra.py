"""Exact double-description facet enumeration for polyhedra and cones."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from nfw.linalg import EchelonBasis, dense, dot, inverse, nullspace, primitive, sparse

logger = logging.getLogger(__name__)

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class ExtremeRay:
    """Extreme ray of a cone {x : <a_i, x> >= 0} with the rows it makes tight."""
    vector: IntVector
    tight: frozenset[int]


@dataclass(frozen=True)
class HalfSpace:
    """
    Facet-defining inequality <normal, x> >= offset.

    points and rays index the input points and recession rays lying on the facet.
    """
    normal: IntVector
    offset: int
    points: frozenset[int]
    rays: frozenset[int] = frozenset()


def _integral_row(row: Sequence[int | Fraction]) -> IntVector:
    values = [Fraction(x) for x in row]
    denominator = math.lcm(*(v.denominator for v in values)) if values else 1
    return tuple(int(v * denominator) for v in values)


def extreme_rays(rows: Sequence[Sequence[int | Fraction]], dim: int) -> list[ExtremeRay]:
    """
    Extreme rays of the pointed cone {x in Q^dim : <a, x> >= 0 for every row a}.

    Motzkin's double description: start from a simplicial cone on dim independent
    rows, then intersect with one halfspace at a time, combining adjacent pairs of
    rays on opposite sides. Adjacency uses the combinatorial test on tight sets.

    Raises:
        ValueError: if the rows do not have full rank (the cone has a lineality space)
    """
    integral = [_integral_row(r) for r in rows]
    chosen: list[int] = []
    basis = EchelonBasis(dim)
    for i, row in enumerate(integral):
        if basis.add(sparse(row)):
            chosen.append(i)
            if basis.rank == dim:
                break
    if basis.rank < dim:
        raise ValueError("constraint rows do not have full rank; cone is not pointed")

    initial = inverse([integral[i] for i in chosen])
    if initial is None:  # pragma: no cover - rows were chosen independent
        raise ValueError("singular initial system")
    chosen_set = frozenset(chosen)
    rays: list[ExtremeRay] = []
    for j, row_index in enumerate(chosen):
        column = [initial[i][j] for i in range(dim)]
        rays.append(ExtremeRay(primitive(column), chosen_set - {row_index}))

    for i, row in enumerate(integral):
        if i in chosen_set:
            continue
        values = [dot(row, ray.vector) for ray in rays]
        positive = [(r, v) for r, v in zip(rays, values) if v > 0]
        negative = [(r, v) for r, v in zip(rays, values) if v < 0]
        updated = [r for r, v in positive]
        updated += [ExtremeRay(r.vector, r.tight | {i}) for r, v in zip(rays, values) if v == 0]
        for rp, vp in positive:
            for rn, vn in negative:
                common = rp.tight & rn.tight
                if len(common) < dim - 2:
                    continue
                if any(
                    other is not rp and other is not rn and common <= other.tight
                    for other in rays
                ):
                    continue
                combined = tuple(vp * b - vn * a for a, b in zip(rp.vector, rn.vector))
                updated.append(ExtremeRay(primitive(combined), common | {i}))
        rays = updated
        logger.debug(f"row {i}: {len(rays)} rays")
    return rays


def polyhedron_facets(
    points: Sequence[Sequence[int]],
    rays: Sequence[Sequence[int]] = (),
) -> list[HalfSpace]:
    """
    Facets of the full-dimensional polyhedron conv(points) + cone(rays).

    Valid inequalities <w, x> >= c form the cone cut out by <w, v> - c >= 0 for
    points and <w, r> >= 0 for rays; its extreme rays with w != 0 are the facets.
    """
    if not points:
        raise ValueError("polyhedron needs at least one point")
    n = len(points[0])
    rows = [tuple(v) + (-1,) for v in points] + [tuple(r) + (0,) for r in rays]
    facets = []
    for ray in extreme_rays(rows, n + 1):
        w = ray.vector[:n]
        if not any(w):
            continue
        normal = primitive(w)
        offset = min(dot(normal, v) for v in points)
        on_points = frozenset(i for i in ray.tight if i < len(points))
        on_rays = frozenset(i - len(points) for i in ray.tight if i >= len(points))
        facets.append(HalfSpace(normal, int(offset), on_points, on_rays))
    return facets


@dataclass(frozen=True)
class AffineHull:
    """Affine hull of a point set: base point, direction basis and injective coordinates."""
    base: IntVector
    directions: tuple[tuple[Fraction, ...], ...]
    coordinates: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def project(self, point: Sequence[int]) -> IntVector:
        return tuple(point[c] for c in self.coordinates)


def affine_hull(points: Sequence[Sequence[int]]) -> AffineHull:
    if not points:
        raise ValueError("affine hull of an empty set")
    base = tuple(points[0])
    n = len(base)
    basis = EchelonBasis(n, (sparse([a - b for a, b in zip(p, base)]) for p in points[1:]))
    rows = basis.reduced_rows()
    return AffineHull(
        base=base,
        directions=tuple(tuple(dense(row, n)) for row in rows),
        coordinates=tuple(basis.pivots),
    )


def polytope_facets(points: Sequence[Sequence[int]]) -> tuple[list[HalfSpace], AffineHull]:
    """
    Facets of conv(points), which may be lower-dimensional.

    Normals are taken inside the direction space of the affine hull, so each facet
    has a unique primitive normal. A single point has no facets.
    """
    hull = affine_hull(points)
    d = hull.dimension
    if d == 0:
        return [], hull
    projected = [hull.project(p) for p in points]
    n = len(hull.base)
    facets = []
    for half in polyhedron_facets(projected):
        tight = sorted(half.points)
        anchor = points[tight[0]]
        constraints = EchelonBasis(d)
        for i in tight[1:]:
            diff = [a - b for a, b in zip(points[i], anchor)]
            constraints.add(sparse([dot(direction, diff) for direction in hull.directions]))
        kernel = nullspace(constraints)
        if len(kernel) != 1:  # pragma: no cover - facets have codimension one in the hull
            raise ValueError("facet normal is not determined")
        y = dense(kernel[0], d)
        w = [sum((y[k] * hull.directions[k][c] for k in range(d)), Fraction(0)) for c in range(n)]
        normal = primitive(w)
        outside = next(p for i, p in enumerate(points) if i not in half.points)
        if dot(normal, outside) < dot(normal, anchor):
            normal = tuple(-x for x in normal)
        offset = min(dot(normal, p) for p in points)
        facets.append(HalfSpace(normal, int(offset), half.points))
    return facets, hull


def cone_facets(generators: Sequence[Sequence[int]]) -> list[frozenset[int]]:
    """
    Facets of the pointed cone spanned by generators, as sets of generator indices.

    Lower-dimensional cones are handled in coordinates of their linear span.
    """
    if not generators:
        return []
    n = len(generators[0])
    basis = EchelonBasis(n, (sparse(g) for g in generators))
    coordinates = basis.pivots
    projected = [tuple(g[c] for c in coordinates) for g in generators]
    return [ray.tight for ray in extreme_rays(projected, len(coordinates))]


def vertex_indices(points: Sequence[Sequence[int]], facets: Sequence[HalfSpace], dim: int) -> frozenset[int]:
    """Indices of points that are vertices: the facets through them span dim directions."""
    vertices = set()
    for i in range(len(points)):
        normals = [sparse(f.normal) for f in facets if i in f.points]
        if EchelonBasis(len(points[i]), normals).rank >= dim:
            vertices.add(i)
    return frozenset(vertices)


def pulling_triangulation(
    generators: Sequence[Sequence[int]],
    order: Sequence[int] | None = None,
) -> list[frozenset[int]]:
    """
    Pulling triangulation of the pointed cone spanned by generators.

    Every generator must span an extreme ray. The first generator in order is
    pulled: the cone is covered by the joins of that apex with the triangulated
    facets not containing it. Restricting to a common face yields the same
    triangulation, so triangulating several cones with one global order is
    consistent across their shared faces.

    Returns:
        Simplicial cones as sets of generator indices
    """
    indices = list(order) if order is not None else list(range(len(generators)))
    return _pull(tuple(indices), generators)


def _pull(indices: tuple[int, ...], generators: Sequence[Sequence[int]]) -> list[frozenset[int]]:
    vectors = [generators[i] for i in indices]
    dim = EchelonBasis(len(vectors[0]), (sparse(v) for v in vectors)).rank
    if len(indices) == dim:
        return [frozenset(indices)]
    apex = indices[0]
    simplices: list[frozenset[int]] = []
    for facet in cone_facets(vectors):
        members = tuple(indices[k] for k in range(len(indices)) if k in facet)
        if apex in members or not members:
            continue
        for simplex in _pull(members, generators):
            simplices.append(simplex | {apex})
    return simplices

"""Simplicial fans on e_1..e_n, p_1..p_r, piecewise-linear functions h_mu and the constant M."""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Literal

from nfw.linalg import dot, solve
from nfw.newton import NewtonPolyhedron, Normal
from nfw.polyhedra import pulling_triangulation

logger = logging.getLogger(__name__)

SubdivisionOrder = Literal["forward", "reverse"]


@dataclass(frozen=True)
class Cone:
    """A cone of the fan described by its labels: e_i for i in coordinates, p_j for j in facets."""
    coordinates: frozenset[int]
    facets: frozenset[int]

    @property
    def s(self) -> int:
        return len(self.facets)

    def to_list(self) -> list[list[int]]:
        return [sorted(self.coordinates), sorted(self.facets)]


@dataclass(frozen=True)
class SimplicialFan:
    """
    Simplicial fan with support R_+^n.

    rays[0..n-1] are e_1..e_n; the remaining rays are the distinct normals not
    already present. normal_ray[j] is the ray index carrying p_j, so a normal
    equal to a unit vector shares that ray and both labels apply.
    """
    n: int
    rays: tuple[Normal, ...]
    normal_ray: tuple[int, ...]
    maximal_cones: tuple[frozenset[int], ...]

    @property
    def r(self) -> int:
        return len(self.normal_ray)

    def labels(self, rays: Iterable[int]) -> Cone:
        """Labels of the cone spanned by the given ray indices."""
        chosen = set(rays)
        return Cone(
            coordinates=frozenset(i for i in range(self.n) if i in chosen),
            facets=frozenset(j for j, ray in enumerate(self.normal_ray) if ray in chosen),
        )

    @cached_property
    def maximal_labels(self) -> tuple[Cone, ...]:
        return tuple(self.labels(c) for c in self.maximal_cones)

    def cones(self) -> list[frozenset[int]]:
        """Every nonzero cone (faces of maximal cones), sorted by size then members."""
        faces: set[frozenset[int]] = set()
        for cone in self.maximal_cones:
            members = sorted(cone)
            for mask in range(1, 1 << len(members)):
                faces.add(frozenset(m for b, m in enumerate(members) if mask >> b & 1))
        return sorted(faces, key=lambda c: (len(c), sorted(c)))

    def generators(self, cone: Iterable[int]) -> list[Normal]:
        return [self.rays[i] for i in sorted(cone)]

    def cone_coordinates(self, cone: frozenset[int], q: Sequence[int | Fraction]) -> list[Fraction] | None:
        """Coefficients of q in the generators of a maximal cone (sorted ray order)."""
        gens = self.generators(cone)
        matrix = [[g[i] for g in gens] for i in range(self.n)]
        return solve(matrix, q)

    def locate(self, q: Sequence[int | Fraction]) -> frozenset[int]:
        """A maximal cone containing q."""
        for cone in self.maximal_cones:
            coefficients = self.cone_coordinates(cone, q)
            if coefficients is not None and all(c >= 0 for c in coefficients):
                return cone
        raise ValueError(f"point {tuple(q)} is not in the support of the fan")

    def walls(self) -> list[tuple[int, int, frozenset[int]]]:
        """Pairs (a, b) of maximal cone indices sharing a codimension-one face."""
        result = []
        cones = self.maximal_cones
        for a in range(len(cones)):
            for b in range(a + 1, len(cones)):
                shared = cones[a] & cones[b]
                if len(shared) == self.n - 1:
                    result.append((a, b, shared))
        return result

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "rays": [list(ray) for ray in self.rays],
            "normal_ray": list(self.normal_ray),
            "cones": [sorted(cone) for cone in self.maximal_cones],
            "labels": [label.to_list() for label in self.maximal_labels],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SimplicialFan":
        return cls(
            n=int(data["n"]),
            rays=tuple(tuple(int(x) for x in ray) for ray in data["rays"]),
            normal_ray=tuple(int(i) for i in data["normal_ray"]),
            maximal_cones=tuple(frozenset(int(i) for i in cone) for cone in data["cones"]),
        )


def _ray_table(normals: Sequence[Normal], n: int) -> tuple[list[Normal], list[int]]:
    rays: list[Normal] = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    index = {ray: i for i, ray in enumerate(rays)}
    normal_ray = []
    for p in normals:
        p = tuple(p)
        if len(p) != n:
            raise ValueError(f"normal {p} does not have {n} entries")
        if p not in index:
            index[p] = len(rays)
            rays.append(p)
        normal_ray.append(index[p])
    return rays, normal_ray


def _stellar(rays: Sequence[Normal], n: int, order: Sequence[int]) -> list[frozenset[int]]:
    """Insert rays n.. in the given order into the coordinate cone by stellar subdivision."""
    cones = [frozenset(range(n))]
    for ray in order:
        p = rays[ray]
        updated = []
        for cone in cones:
            gens = sorted(cone)
            matrix = [[rays[g][i] for g in gens] for i in range(n)]
            coefficients = solve(matrix, p)
            if coefficients is None or any(c < 0 for c in coefficients):
                updated.append(cone)
                continue
            for g, c in zip(gens, coefficients):
                if c > 0:
                    updated.append((cone - {g}) | {ray})
        cones = updated
    return cones


def _vertex_cones(
    rays: Sequence[Normal],
    polyhedron: NewtonPolyhedron,
    order: Sequence[int],
) -> list[frozenset[int]]:
    """Pulling triangulations of the normal cones at the vertices of the polyhedron."""
    minima = [min(dot(ray, q) for q in polyhedron.support) for ray in rays]
    cones: set[frozenset[int]] = set()
    for v in sorted(polyhedron.vertices):
        tight = [i for i, ray in enumerate(rays) if dot(ray, v) == minima[i]]
        local_order = [i for i in order if i in tight]
        generators = [rays[i] for i in local_order]
        for simplex in pulling_triangulation(generators):
            cones.add(frozenset(local_order[k] for k in simplex))
    return sorted(cones, key=sorted)


def build_fan(
    normals: Sequence[Normal],
    n: int,
    polyhedron: NewtonPolyhedron | None = None,
    order: SubdivisionOrder = "forward",
) -> SimplicialFan:
    """
    Build a simplicial fan with support R_+^n on the rays e_1..e_n, p_1..p_r.

    With a polyhedron, the fan refines its dual fan: the normal cone of each
    vertex is triangulated by pulling rays in a global order. Without one, the
    normals are inserted into the coordinate cone by stellar subdivision in
    sorted order.

    Args:
        normals: Facet normals p_1..p_r with positive components
        n: Ambient dimension
        polyhedron: Convenient Newton polyhedron whose dual fan is refined
        order: "forward" or "reverse" ray order, giving two subdivisions

    Returns:
        SimplicialFan
    """
    if order not in ("forward", "reverse"):
        raise ValueError("order must be 'forward' or 'reverse'")
    for p in normals:
        if any(x <= 0 for x in p):
            raise ValueError(f"fan normals need positive components, got {tuple(p)}")
    rays, normal_ray = _ray_table(normals, n)
    if polyhedron is not None:
        ray_order = list(range(len(rays)))
        if order == "reverse":
            ray_order.reverse()
        cones = _vertex_cones(rays, polyhedron, ray_order)
    else:
        inserted = sorted(range(n, len(rays)), key=lambda i: rays[i])
        if order == "reverse":
            inserted.reverse()
        cones = _stellar(rays, n, inserted)
    cones = sorted(set(cones), key=sorted)
    logger.debug(f"fan on {len(rays)} rays with {len(cones)} maximal cones")
    return SimplicialFan(
        n=n,
        rays=tuple(rays),
        normal_ray=tuple(normal_ray),
        maximal_cones=tuple(cones),
    )


@dataclass(frozen=True)
class PLFunction:
    """Function on R_+^n, linear on each maximal cone of a simplicial fan."""
    fan: SimplicialFan
    values: tuple[Fraction, ...]

    @cached_property
    def forms(self) -> tuple[tuple[Fraction, ...], ...]:
        """Linear form of each maximal cone, as a coefficient vector."""
        forms = []
        for cone in self.fan.maximal_cones:
            gens = self.fan.generators(cone)
            form = solve(gens, [self.values[i] for i in sorted(cone)])
            if form is None:  # pragma: no cover - maximal cones are simplicial
                raise ValueError("maximal cone is not full-dimensional")
            forms.append(tuple(form))
        return tuple(forms)

    def __call__(self, q: Sequence[int | Fraction]) -> Fraction:
        cone = self.fan.locate(q)
        form = self.forms[self.fan.maximal_cones.index(cone)]
        return Fraction(dot(form, q))

    def is_convex(self) -> bool:
        """
        Convexity in the toric sense: h is the minimum of its linear forms.

        Checked locally: across every wall, each cone's form is at least h at
        the neighbouring cone's off-wall generator.
        """
        cones = self.fan.maximal_cones
        for a, b, shared in self.fan.walls():
            for here, there in ((a, b), (b, a)):
                (off,) = cones[there] - shared
                if dot(self.forms[here], self.fan.rays[off]) < self.values[off]:
                    logger.debug(f"convexity fails across wall {sorted(shared)}")
                    return False
        return True

    def __add__(self, other: "PLFunction") -> "PLFunction":
        if other.fan != self.fan:
            raise ValueError("PL functions live on different fans")
        return PLFunction(self.fan, tuple(a + b for a, b in zip(self.values, other.values)))


def _ray_values(fan: SimplicialFan, normal_values: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    if len(normal_values) != fan.r:
        raise ValueError(f"expected {fan.r} values, got {len(normal_values)}")
    values = [Fraction(0)] * len(fan.rays)
    for j, ray in enumerate(fan.normal_ray):
        values[ray] = Fraction(normal_values[j])
    return tuple(values)


def h_mu(fan: SimplicialFan, mu: Sequence[int]) -> PLFunction:
    """h with h(e_i) = 0 and h(p_j) = mu_j, linear on each cone."""
    return PLFunction(fan, _ray_values(fan, mu))


def h_hat(fan: SimplicialFan, level: int, offsets: Sequence[int], m: int) -> PLFunction:
    """One-index h_l with h(p_j) = l * nu_j / M."""
    return PLFunction(fan, _ray_values(fan, [Fraction(level * nu, m) for nu in offsets]))


def compute_m(
    normals: Sequence[Normal],
    offsets: Sequence[int],
    minimal: bool = False,
    max_points: int = 200_000,
) -> int:
    """
    Integrality constant M with M * min_j <p_j, q> / nu_j integral on N^n.

    Defaults to lcm(nu). With minimal=True the least divisor of the lcm that
    works on the certificate set {q : some <p_j, q> <= lcm * max nu} is returned.

    Raises:
        ResourceLimitError: if the certificate set exceeds max_points
    """
    from nfw.lattice import enumerate_below

    if not offsets:
        return 1
    if any(nu < 1 for nu in offsets):
        raise ValueError("offsets must be positive")
    top = math.lcm(*offsets)
    if not minimal:
        return top
    bound = top * max(offsets)
    points = enumerate_below(normals, [bound] * len(normals), len(normals[0]), max_points)
    ratios = [min(Fraction(dot(p, q), nu) for p, nu in zip(normals, offsets)) for q in points]
    for d in sorted(d for d in range(1, top + 1) if top % d == 0):
        if all((d * x).denominator == 1 for x in ratios):
            logger.info(f"minimal M = {d} (lcm {top})")
            return d
    return top  # pragma: no cover - the lcm always works


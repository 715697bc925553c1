"""Codimension, non-degeneracy and polyhedral hypothesis checks."""

import itertools
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Literal

from nfw.errors import ResourceLimitError
from nfw.fan import SimplicialFan
from nfw.groebner import PolyIdeal, ideal_dim_affine, ideal_dim_torus
from nfw.newton import (
    NewtonPolyhedron,
    edge_sets_equal,
    initial_part,
    initial_part_cone,
    is_convenient,
    is_full,
    remark_k2_condition,
    weak_fullness_condition,
)
from nfw.polycore import Polynomial, partial_derivative
from nfw.problem import Limits, Problem

logger = logging.getLogger(__name__)

Space = Literal["affine", "torus"]


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ConditionResult:
    """
    Outcome of one condition of a hypothesis.

    Args:
        name: Condition name
        parameters: What the condition was evaluated at (facet subset, cone, ...)
        verdict: PASS, FAIL or INCONCLUSIVE
        dimensions: Computed dimensions and bounds
        witness: Why the verdict is not PASS, when it is not
        applicable: False when a precondition of the condition does not hold
    """
    name: str
    parameters: dict[str, Any]
    verdict: Verdict
    dimensions: dict[str, int] = field(default_factory=dict)
    witness: str | None = None
    applicable: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "verdict": self.verdict.value,
            "dimensions": self.dimensions,
            "witness": self.witness,
            "applicable": self.applicable,
        }


@dataclass(frozen=True)
class HypothesisReport:
    """
    All conditions of one named hypothesis.

    With combine="all" FAIL dominates INCONCLUSIVE dominates PASS. With
    combine="any" the conditions are alternatives and one PASS suffices.
    Conditions that are not applicable are ignored; if none applies the
    verdict is INCONCLUSIVE.
    """
    name: str
    conditions: tuple[ConditionResult, ...] = ()
    combine: Literal["all", "any"] = "all"

    @property
    def verdict(self) -> Verdict:
        verdicts = {c.verdict for c in self.conditions if c.applicable}
        if not verdicts:
            return Verdict.INCONCLUSIVE if self.conditions else Verdict.PASS
        if self.combine == "any":
            if Verdict.PASS in verdicts:
                return Verdict.PASS
            return Verdict.INCONCLUSIVE if Verdict.INCONCLUSIVE in verdicts else Verdict.FAIL
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in verdicts:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "conditions": [c.to_dict() for c in self.conditions],
        }


def _zero_generators(name: str, polys: Sequence[Polynomial]) -> HypothesisReport | None:
    zeros = [i for i, g in enumerate(polys) if g.is_zero]
    if not zeros:
        return None
    return HypothesisReport(
        name,
        (
            ConditionResult(
                "nonzero",
                {"zero_generators": zeros},
                Verdict.FAIL,
                witness=f"g{zeros[0] + 1} is the zero polynomial",
            ),
        ),
    )


def codimension_condition(
    name: str,
    parameters: dict[str, Any],
    system: Sequence[Polynomial],
    n: int,
    bound: int,
    space: Space,
    limits: Limits,
    exact_fail: bool = True,
) -> ConditionResult:
    """
    Whether V(system) has codimension >= bound in C^n or in the torus.

    An empty variety passes any bound; an all-zero system has codimension 0.
    When exact_fail is False a failed affine bound is INCONCLUSIVE, since the
    germ at 0 may still satisfy it.
    """
    dims: dict[str, int] = {"bound": bound}
    if bound <= 0:
        return ConditionResult(name, parameters, Verdict.PASS, dims)
    ideal = PolyIdeal(n, tuple(system))
    try:
        if space == "affine":
            dimension = ideal_dim_affine(ideal, limits.max_pairs, limits.max_degree)
        else:
            dimension = ideal_dim_torus(ideal, limits.max_pairs, limits.max_degree)
    except ResourceLimitError as e:
        logger.warning(f"{name} {parameters}: {e}")
        return ConditionResult(name, parameters, Verdict.INCONCLUSIVE, dims, witness=str(e))
    dims[f"{space}_dim"] = dimension
    if dimension < 0:
        return ConditionResult(name, parameters, Verdict.PASS, dims)
    codimension = n - dimension
    dims["codim"] = codimension
    if codimension >= bound:
        return ConditionResult(name, parameters, Verdict.PASS, dims)
    witness = f"codimension {codimension} < {bound} in the {space} space"
    if not exact_fail:
        logger.warning(f"{name} {parameters}: {witness}; germ dimension not decided")
        return ConditionResult(
            name, parameters, Verdict.INCONCLUSIVE, dims, witness=f"{witness} (global)"
        )
    return ConditionResult(name, parameters, Verdict.FAIL, dims, witness=witness)


def _facet_subset_check(
    name: str,
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    bound: Callable[[int], int],
    min_size: int,
    limits: Limits,
) -> HypothesisReport:
    """Codimension of {in_J g_i} in C^n for every facet subset J with |J| >= min_size."""
    if (report := _zero_generators(name, polys)) is not None:
        return report
    n = polyhedron.n
    conditions = []
    for s in range(min_size, polyhedron.r + 1):
        for chosen in itertools.combinations(range(polyhedron.r), s):
            system = [initial_part(g, chosen, polyhedron) for g in polys]
            # in_J g is weighted homogeneous for positive weights, so V is a cone at 0
            positive = all(x > 0 for j in chosen for x in polyhedron.normals[j])
            conditions.append(
                codimension_condition(
                    name,
                    {"facets": list(chosen)},
                    system,
                    n,
                    bound(s),
                    "affine",
                    limits,
                    exact_fail=positive,
                )
            )
    report = HypothesisReport(name, tuple(conditions))
    logger.info(f"{name}: {report.verdict.value} over {len(conditions)} facet subsets")
    return report


def check_thm11(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    limits: Limits | None = None,
) -> HypothesisReport:
    """The initial parts on every facet subset of size s cut out codimension >= k - s + 1."""
    k = len(polys)
    return _facet_subset_check("thm1.1", polys, polyhedron, lambda s: k - s + 1, 1, limits or Limits())


def check_lemma13(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    limits: Limits | None = None,
) -> HypothesisReport:
    k = len(polys)
    return _facet_subset_check("lemma1.3", polys, polyhedron, lambda s: k - s, 1, limits or Limits())


def check_thm14(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    limits: Limits | None = None,
) -> HypothesisReport:
    """Facet subsets of size s >= 2 cut out codimension >= k - s + 2."""
    k = len(polys)
    return _facet_subset_check("thm1.4", polys, polyhedron, lambda s: k - s + 2, 2, limits or Limits())


def _cone_systems(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    offsets: Sequence[Sequence[int | Fraction]] | None = None,
) -> list[tuple[dict[str, Any], int, int, list[Polynomial]]]:
    """(parameters, l, s, in_sigma system) for every cone with at least one facet ray."""
    systems = []
    for cone in fan.cones():
        label = fan.labels(cone)
        if not label.facets:
            continue
        system = [
            initial_part_cone(
                g,
                label.coordinates,
                label.facets,
                polyhedron,
                offsets[i] if offsets is not None else None,
            )
            for i, g in enumerate(polys)
        ]
        parameters = {"coordinates": sorted(label.coordinates), "facets": sorted(label.facets)}
        systems.append((parameters, len(label.coordinates), label.s, system))
    return systems


def _cone_check(
    name: str,
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    extra: int,
    limits: Limits,
    offsets: Sequence[Sequence[int | Fraction]] | None = None,
) -> HypothesisReport:
    if (report := _zero_generators(name, polys)) is not None:
        return report
    k = len(polys)
    conditions = [
        codimension_condition(name, parameters, system, fan.n, k - l - s + extra, "torus", limits)
        for parameters, l, s, system in _cone_systems(polys, polyhedron, fan, offsets)
    ]
    report = HypothesisReport(name, tuple(conditions))
    logger.info(f"{name}: {report.verdict.value} over {len(conditions)} cones")
    return report


def check_lemma22(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    limits: Limits | None = None,
) -> HypothesisReport:
    """Per cone with l coordinate rays and s facet rays: torus codimension >= k - l - s."""
    return _cone_check("lemma2.2", polys, polyhedron, fan, 0, limits or Limits())


def check_lemma23(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    limits: Limits | None = None,
) -> HypothesisReport:
    """Per cone: torus codimension >= k - l - s + 1."""
    return _cone_check("lemma2.3", polys, polyhedron, fan, 1, limits or Limits())


def check_lemma23_one_index(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    rhos: Sequence[int],
    m: int,
    limits: Limits | None = None,
) -> HypothesisReport:
    """
    The cone-wise bound k - l - s + 1 with initial parts taken at the offsets
    nu_j * rho_i / M of the one-index filtration.
    """
    offsets = [[Fraction(nu * rho, m) for nu in polyhedron.offsets] for rho in rhos]
    return _cone_check("lemma2.3-one-index", polys, polyhedron, fan, 1, limits or Limits(), offsets)


def polynomial_determinant(matrix: Sequence[Sequence[Polynomial]], nvars: int) -> Polynomial:
    """Determinant of a square polynomial matrix by cofactor expansion along the first row."""
    size = len(matrix)
    if size == 0:
        return Polynomial.constant(nvars, 1)
    if size == 1:
        return matrix[0][0]
    total = Polynomial.zero(nvars)
    for column, entry in enumerate(matrix[0]):
        if entry.is_zero:
            continue
        minor = [row[:column] + row[column + 1:] for row in matrix[1:]]
        term = entry * polynomial_determinant(minor, nvars)
        total = total - term if column % 2 else total + term
    return total


def jacobian_minors(system: Sequence[Polynomial], nvars: int) -> list[Polynomial]:
    """All k x k minors of the Jacobian of a k-element system."""
    k = len(system)
    jacobian = [[partial_derivative(g, i) for i in range(nvars)] for g in system]
    minors = []
    for columns in itertools.combinations(range(nvars), k):
        minor = polynomial_determinant([[row[c] for c in columns] for row in jacobian], nvars)
        if not minor.is_zero:
            minors.append(minor)
    return minors


def check_nondegenerate(
    polys: Sequence[Polynomial],
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    limits: Limits | None = None,
    name: str = "nondegenerate",
) -> HypothesisReport:
    """
    For every cone with a facet ray, {in_sigma g_i} is smooth of codimension k in the torus.

    Checked for the given coefficients: the system plus the k x k minors of its
    Jacobian has no torus zeros, and the system alone is empty or of codimension k.
    """
    limits = limits or Limits()
    if (report := _zero_generators(name, polys)) is not None:
        return report
    n, k = fan.n, len(polys)
    conditions = []
    for parameters, _, _, system in _cone_systems(polys, polyhedron, fan):
        try:
            dimension = ideal_dim_torus(PolyIdeal(n, tuple(system)), limits.max_pairs, limits.max_degree)
            if dimension < 0:
                conditions.append(ConditionResult(name, parameters, Verdict.PASS, {"torus_dim": -1}))
                continue
            singular = ideal_dim_torus(
                PolyIdeal(n, tuple(system) + tuple(jacobian_minors(system, n))),
                limits.max_pairs,
                limits.max_degree,
            )
        except ResourceLimitError as e:
            logger.warning(f"{name} {parameters}: {e}")
            conditions.append(ConditionResult(name, parameters, Verdict.INCONCLUSIVE, witness=str(e)))
            continue
        dims = {"torus_dim": dimension, "singular_dim": singular}
        if n - dimension != k:
            witness = f"torus codimension {n - dimension} != {k}"
            conditions.append(ConditionResult(name, parameters, Verdict.FAIL, dims, witness))
        elif singular >= 0:
            witness = f"singular locus of dimension {singular} in the torus"
            conditions.append(ConditionResult(name, parameters, Verdict.FAIL, dims, witness))
        else:
            conditions.append(ConditionResult(name, parameters, Verdict.PASS, dims))
    report = HypothesisReport(name, tuple(conditions))
    logger.info(f"{name}: {report.verdict.value} over {len(conditions)} cones")
    return report


def _flag(name: str, holds: bool, parameters: dict[str, Any] | None = None, witness: str = "") -> ConditionResult:
    return ConditionResult(
        name,
        parameters or {},
        Verdict.PASS if holds else Verdict.FAIL,
        witness=None if holds else witness,
    )


def check_full(polyhedra: Sequence[NewtonPolyhedron]) -> HypothesisReport:
    conditions = tuple(
        _flag("full", is_full(p), {"index": i}, f"dimension {p.dimension} < {p.n}")
        for i, p in enumerate(polyhedra)
    )
    return HypothesisReport("full", conditions)


def check_edges(polyhedra: Sequence[NewtonPolyhedron]) -> HypothesisReport:
    holds = edge_sets_equal(polyhedra)
    return HypothesisReport("edges", (_flag("edges", holds, witness="dual fans have different edges"),))


def _not_applicable(name: str, parameters: dict[str, Any], witness: str) -> HypothesisReport:
    condition = ConditionResult(name, parameters, Verdict.INCONCLUSIVE, witness=witness, applicable=False)
    return HypothesisReport(name, (condition,))


def check_remark_k2(polyhedra: Sequence[NewtonPolyhedron]) -> HypothesisReport:
    if len(polyhedra) != 2:
        return _not_applicable("remark-k2", {"k": len(polyhedra)}, "needs exactly two polynomials")
    if polyhedra[0].n < 4:
        return _not_applicable("remark-k2", {"n": polyhedra[0].n}, "needs n >= 4")
    holds = remark_k2_condition(polyhedra[0], polyhedra[1])
    witness = "a sum facet meets a summand in a face of dimension < 2"
    return HypothesisReport("remark-k2", (_flag("remark-k2", holds, witness=witness),))


def check_weak_fullness(polyhedra: Sequence[NewtonPolyhedron]) -> HypothesisReport:
    holds = weak_fullness_condition(polyhedra)
    witness = "partial Minkowski sums grow in dimension or some dim D_j <= j"
    return HypothesisReport("weak-full", (_flag("weak-full", holds, witness=witness),))


def check_section4(polyhedra: Sequence[NewtonPolyhedron]) -> HypothesisReport:
    """
    Fullness, equal edge sets, weak fullness and the k=2 condition, side by side.

    Each is a hypothesis set of its own, so the report passes when one of them
    passes. Alternatives whose preconditions fail are marked not applicable.
    """
    conditions = []
    for check in (check_full, check_edges, check_weak_fullness, check_remark_k2):
        report = check(polyhedra)
        witness = next((c.witness for c in report.conditions if c.verdict is not Verdict.PASS), None)
        conditions.append(
            ConditionResult(
                report.name,
                {"conditions": len(report.conditions)},
                report.verdict,
                witness=witness,
                applicable=any(c.applicable for c in report.conditions),
            )
        )
    return HypothesisReport("section4", tuple(conditions), combine="any")


def check_kushnirenko(
    f: Polynomial,
    polyhedron: NewtonPolyhedron,
    fan: SimplicialFan,
    limits: Limits | None = None,
) -> HypothesisReport:
    """f is convenient and non-degenerate on its own Newton polyhedron."""
    convenient = is_convenient([f])
    conditions = [_flag("convenient", convenient, witness="f misses a coordinate axis")]
    if convenient:
        conditions.extend(check_nondegenerate([f], polyhedron, fan, limits, name="kushnirenko").conditions)
    return HypothesisReport("kushnirenko", tuple(conditions))


def _germ_only(problem: Problem, name: str) -> None:
    if problem.laurent:
        raise ValueError(f"check {name} needs germ or partials mode")


def _run_thm11(problem: Problem) -> HypothesisReport:
    _germ_only(problem, "thm1.1")
    return check_thm11(problem.polys, problem.polyhedron, problem.limits)


def _run_lemma13(problem: Problem) -> HypothesisReport:
    _germ_only(problem, "lemma1.3")
    return check_lemma13(problem.polys, problem.polyhedron, problem.limits)


def _run_thm14(problem: Problem) -> HypothesisReport:
    _germ_only(problem, "thm1.4")
    return check_thm14(problem.polys, problem.polyhedron, problem.limits)


def _run_lemma22(problem: Problem) -> HypothesisReport:
    return check_lemma22(problem.polys, problem.polyhedron, problem.fan, problem.limits)


def _run_lemma23(problem: Problem) -> HypothesisReport:
    return check_lemma23(problem.polys, problem.polyhedron, problem.fan, problem.limits)


def _run_lemma23_one_index(problem: Problem) -> HypothesisReport:
    return check_lemma23_one_index(
        problem.polys, problem.polyhedron, problem.fan, problem.rhos, problem.m, problem.limits
    )


def _run_nondegenerate(problem: Problem) -> HypothesisReport:
    return check_nondegenerate(problem.polys, problem.polyhedron, problem.fan, problem.limits)


def _run_kushnirenko(problem: Problem) -> HypothesisReport:
    if problem.f is None:
        raise ValueError("check kushnirenko needs partials mode")
    return check_kushnirenko(problem.f, problem.polyhedron, problem.fan, problem.limits)


CHECKS: dict[str, Callable[[Problem], HypothesisReport]] = {
    "thm1.1": _run_thm11,
    "lemma1.3": _run_lemma13,
    "thm1.4": _run_thm14,
    "lemma2.2": _run_lemma22,
    "lemma2.3": _run_lemma23,
    "lemma2.3-one-index": _run_lemma23_one_index,
    "nondegenerate": _run_nondegenerate,
    "full": lambda problem: check_full(problem.summands),
    "edges": lambda problem: check_edges(problem.summands),
    "remark-k2": lambda problem: check_remark_k2(problem.summands),
    "weak-full": lambda problem: check_weak_fullness(problem.summands),
    "section4": lambda problem: check_section4(problem.summands),
    "kushnirenko": _run_kushnirenko,
}

# Polyhedral checks on the individual summands, which need no fan
_SUMMAND_CHECKS = {"full", "edges", "remark-k2", "weak-full", "section4"}


def run_check(name: str, problem: Problem) -> HypothesisReport:
    """
    Run a named check against a problem.

    Raises:
        KeyError: for an unknown check name
        ValueError: if the check does not apply to the problem's mode
    """
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    if name not in _SUMMAND_CHECKS and name != "kushnirenko":
        if (report := _zero_generators(name, problem.polys)) is not None:
            return report
    return CHECKS[name](problem)

"""JSON report models."""

import hashlib
import json
from collections.abc import Mapping
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from nfw.artin import GradedRow
from nfw.fan import SimplicialFan
from nfw.hypotheses import ConditionResult, HypothesisReport
from nfw.newton import NewtonPolyhedron
from nfw.series import TruncatedSeries

IdentityStatus = Literal["equal", "differs", "gated", "skipped", "error"]


class SeriesModel(BaseModel):
    """A truncated series: window corners and the nonzero terms."""
    model_config = ConfigDict(frozen=True)

    arity: int
    lo: list[int]
    hi: list[int]
    floor: int | None = None
    terms: list[tuple[list[int], int]] = Field(default_factory=list)
    coefficients: list[int] | None = None

    @classmethod
    def from_series(cls, series: TruncatedSeries) -> "SeriesModel":
        return cls(
            arity=series.arity,
            lo=list(series.window.lo),
            hi=list(series.window.hi),
            floor=series.floor,
            terms=[(list(mu), c) for mu, c in sorted(series.coefficients.items())],
            coefficients=series.to_list() if series.arity == 1 else None,
        )


class FacetModel(BaseModel):
    normal: list[int]
    offset: int
    points: list[list[int]]


class PolyhedronModel(BaseModel):
    n: int
    laurent: bool
    dimension: int
    facets: list[FacetModel]
    vertices: list[list[int]]

    @classmethod
    def from_polyhedron(cls, polyhedron: NewtonPolyhedron) -> "PolyhedronModel":
        return cls(
            n=polyhedron.n,
            laurent=polyhedron.laurent,
            dimension=polyhedron.dimension,
            facets=[
                FacetModel(normal=list(f.normal), offset=f.offset, points=[list(q) for q in sorted(f.points)])
                for f in polyhedron.facets
            ],
            vertices=[list(q) for q in sorted(polyhedron.vertices)],
        )


class FanModel(BaseModel):
    n: int
    rays: list[list[int]]
    normal_ray: list[int]
    cones: list[list[int]]
    labels: list[list[list[int]]]

    @classmethod
    def from_fan(cls, fan: SimplicialFan) -> "FanModel":
        return cls(**fan.to_dict())

    def to_fan(self) -> SimplicialFan:
        return SimplicialFan.from_dict(self.model_dump())


class GradedRowModel(BaseModel):
    mu: list[int]
    ambient: int
    induced: int
    bar: int

    @classmethod
    def from_row(cls, row: GradedRow) -> "GradedRowModel":
        return cls(mu=list(row.mu), ambient=row.ambient, induced=row.induced, bar=row.bar)


class ConditionModel(BaseModel):
    name: str
    parameters: dict[str, Any]
    verdict: str
    dimensions: dict[str, int]
    witness: str | None = None
    applicable: bool = True

    @classmethod
    def from_result(cls, result: ConditionResult) -> "ConditionModel":
        return cls(**result.to_dict())


class HypothesisModel(BaseModel):
    name: str
    verdict: str
    conditions: list[ConditionModel]

    @classmethod
    def from_report(cls, report: HypothesisReport) -> "HypothesisModel":
        return cls(
            name=report.name,
            verdict=report.verdict.value,
            conditions=[ConditionModel.from_result(c) for c in report.conditions],
        )


class IdentityResult(BaseModel):
    """
    One identity compared on the window.

    status is "equal" or "differs" when both sides were computed; "gated" when a
    required hypothesis did not PASS (sides are still shown); "skipped" when the
    identity does not apply; "error" when a side could not be computed.
    counted identities decide the exit code.
    """
    name: str
    status: IdentityStatus
    counted: bool = True
    gate: str | None = None
    gate_verdict: str | None = None
    left: SeriesModel | int | None = None
    right: SeriesModel | int | None = None
    left_source: str | None = None
    right_source: str | None = None
    first_discrepancy: dict[str, Any] | None = None
    note: str | None = None

    @property
    def failed(self) -> bool:
        return self.counted and self.status in ("differs", "error")


class Report(BaseModel):
    """Top-level JSON document written by every command."""
    command: str
    input_digest: str
    version: str
    options: dict[str, Any] = Field(default_factory=dict)
    results: dict[str, Any] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)
    timing_ms: float = 0.0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def input_digest(text: str, version: str, command: str, options: Mapping[str, Any]) -> str:
    """sha256 over the problem text, version, command and options."""
    payload = json.dumps(
        {"text": text, "version": version, "command": command, "options": dict(options)},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()

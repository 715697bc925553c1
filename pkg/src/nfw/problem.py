"""Problem files, resource limits and the per-problem analysis context."""

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

from nfw.errors import PolynomialSyntaxError, ProblemFileError
from nfw.fan import SimplicialFan, build_fan, compute_m
from nfw.lattice import FiltrationSpec, rho
from nfw.newton import (
    NewtonPolyhedron,
    NuMatrix,
    is_convenient,
    newton_polyhedron,
    newton_polyhedron_of,
    newton_polytope,
    nu_matrix,
)
from nfw.polycore import Polynomial, parse_polynomial, partial_derivative
from nfw.series import Window

logger = logging.getLogger(__name__)

Mode = Literal["germ", "laurent", "partials"]

MODES = ("germ", "laurent", "partials")
DEFAULT_WINDOW = (0, 8)

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_GENERATOR_KEY = re.compile(r"^g([1-9][0-9]*)$")
_KEYS = ("vars", "mode", "f", "window", "minimal-M", "checks")
_TRUE = {"yes", "true", "on", "1"}
_FALSE = {"no", "false", "off", "0"}


@dataclass(frozen=True)
class Limits:
    """
    Resource caps for the exact engines.

    Args:
        max_pairs: S-pairs processed per Groebner basis
        max_degree: Total degree of new Groebner basis elements
        max_toric_radius: Half-width of the q box in the toric sum
        max_quotient_depth: Deepest monomial cut for total quotient dimensions
        max_basis: Monomials in one Artinian quotient basis
        max_window_points: Points in a series window
    """
    max_pairs: int = 5000
    max_degree: int = 64
    max_toric_radius: int = 48
    max_quotient_depth: int = 40
    max_basis: int = 50000
    max_window_points: int = 20000

    def __post_init__(self) -> None:
        for name in (
            "max_pairs",
            "max_degree",
            "max_toric_radius",
            "max_quotient_depth",
            "max_basis",
            "max_window_points",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Source:
    """A polynomial definition with its position in the file."""
    key: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class ProblemFile:
    """
    Parsed problem file.

    Args:
        names: Declared variable names
        mode: "germ", "laurent" or "partials"
        sources: g1..gk definitions, or the single f in partials mode
        window: (lo, hi) bounds, if given
        minimal_m: Whether to search for the minimal M, if given
        checks: Check names, if given
        text: The raw file text
    """
    names: tuple[str, ...]
    mode: Mode
    sources: tuple[Source, ...]
    window: tuple[int, int] | None = None
    minimal_m: bool | None = None
    checks: tuple[str, ...] | None = None
    text: str = field(default="", repr=False)

    def polynomials(self) -> list[Polynomial]:
        """Parse every source; syntax errors are reported at file positions."""
        polys = []
        for source in self.sources:
            try:
                polys.append(parse_polynomial(source.text, self.names, laurent=self.mode == "laurent"))
            except PolynomialSyntaxError as e:
                raise ProblemFileError(
                    f"{source.key}: {e.message}", source.line, source.column + e.position
                ) from e
            except OverflowError as e:
                raise ProblemFileError(f"{source.key}: {e}", source.line, source.column) from e
        return polys


def _split_line(raw: str) -> str:
    hash_at = raw.find("#")
    return raw if hash_at < 0 else raw[:hash_at]


def parse_problem_file(text: str) -> ProblemFile:
    """
    Parse the line-oriented "key: value" problem format.

    Raises:
        ProblemFileError: on unknown or duplicate keys, missing required keys
            and malformed values (polynomials are parsed lazily)
    """
    seen: dict[str, tuple[int, int, str]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _split_line(raw)
        if not line.strip():
            continue
        colon = line.find(":")
        indent = len(line) - len(line.lstrip())
        if colon < 0:
            raise ProblemFileError("expected 'key: value'", number, indent + 1)
        key = line[:colon].strip()
        if key not in _KEYS and not _GENERATOR_KEY.match(key):
            raise ProblemFileError(f"unknown key {key!r}", number, indent + 1)
        if key in seen:
            raise ProblemFileError(f"duplicate key {key!r}", number, indent + 1)
        value = line[colon + 1:]
        offset = colon + 1 + (len(value) - len(value.lstrip()))
        seen[key] = (number, offset + 1, value.strip())

    def require(key: str) -> tuple[int, int, str]:
        if key not in seen:
            raise ProblemFileError(f"missing required key {key!r}", max(1, len(text.splitlines())))
        return seen[key]

    line, column, value = require("vars")
    names = tuple(value.replace(",", " ").split())
    if not names:
        raise ProblemFileError("vars must name at least one variable", line, column)
    for name in names:
        if not _IDENT.match(name):
            raise ProblemFileError(f"invalid variable name {name!r}", line, column)
    if len(set(names)) != len(names):
        raise ProblemFileError("variable names must be distinct", line, column)

    mode: Mode = "germ"
    if "mode" in seen:
        line, column, value = seen["mode"]
        if value not in MODES:
            raise ProblemFileError(f"mode must be one of {', '.join(MODES)}", line, column)
        mode = value  # type: ignore[assignment]

    generator_keys = sorted(
        (int(m.group(1)), key) for key in seen if (m := _GENERATOR_KEY.match(key))
    )
    if mode == "partials":
        if generator_keys:
            line = seen[generator_keys[0][1]][0]
            raise ProblemFileError("partials mode takes f, not g1..gk", line)
        line, column, value = require("f")
        sources: tuple[Source, ...] = (Source("f", value, line, column),)
    else:
        if "f" in seen:
            raise ProblemFileError("f is only allowed in partials mode", seen["f"][0])
        if not generator_keys:
            raise ProblemFileError("at least one polynomial g1 is required", max(1, len(text.splitlines())))
        indices = [i for i, _ in generator_keys]
        if indices != list(range(1, len(indices) + 1)):
            missing = next(i for i in range(1, len(indices) + 2) if i not in indices)
            raise ProblemFileError(f"g{missing} is missing", seen[generator_keys[-1][1]][0])
        if mode == "germ" and len(generator_keys) > len(names):
            line, column, _ = seen[generator_keys[len(names)][1]]
            raise ProblemFileError(
                f"{len(generator_keys)} polynomials in {len(names)} variables; germ mode needs k <= n",
                line,
                column,
            )
        sources = tuple(
            Source(key, seen[key][2], seen[key][0], seen[key][1]) for _, key in generator_keys
        )
    for source in sources:
        if not source.text:
            raise ProblemFileError(f"{source.key} is empty", source.line, source.column)

    window = None
    if "window" in seen:
        line, column, value = seen["window"]
        try:
            parsed = Window.parse(value)
        except ValueError as e:
            raise ProblemFileError(str(e), line, column) from e
        window = (parsed.lo[0], parsed.hi[0])

    minimal_m = None
    if "minimal-M" in seen:
        line, column, value = seen["minimal-M"]
        if value.lower() in _TRUE:
            minimal_m = True
        elif value.lower() in _FALSE:
            minimal_m = False
        else:
            raise ProblemFileError("minimal-M must be yes or no", line, column)

    checks = None
    if "checks" in seen:
        checks = tuple(seen["checks"][2].replace(",", " ").split())

    return ProblemFile(
        names=names,
        mode=mode,
        sources=sources,
        window=window,
        minimal_m=minimal_m,
        checks=checks,
        text=text,
    )


class Problem:
    """
    Analysis context for one problem: polynomials, polyhedron, fan and filtration.

    Every derived object is computed on first use and cached.

    Args:
        problem_file: Parsed problem file
        window: (lo, hi) overriding the file's window
        minimal_m: Overrides the file's minimal-M flag
        limits: Resource caps
    """

    def __init__(
        self,
        problem_file: ProblemFile,
        window: tuple[int, int] | None = None,
        minimal_m: bool | None = None,
        limits: Limits | None = None,
    ):
        self.file = problem_file
        self.bounds = window or problem_file.window or DEFAULT_WINDOW
        if self.bounds[0] > self.bounds[1]:
            raise ValueError(f"window {self.bounds[0]}..{self.bounds[1]} is empty")
        if minimal_m is None:
            minimal_m = bool(problem_file.minimal_m)
        self.minimal_m = minimal_m
        self.limits = limits or Limits()
        self.warnings: list[str] = []

    @classmethod
    def from_text(cls, text: str, **options: object) -> "Problem":
        return cls(parse_problem_file(text), **options)  # type: ignore[arg-type]

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            logger.warning(message)
            self.warnings.append(message)

    @property
    def mode(self) -> Mode:
        return self.file.mode

    @property
    def laurent(self) -> bool:
        return self.mode == "laurent"

    @property
    def n(self) -> int:
        return len(self.file.names)

    @cached_property
    def sources(self) -> list[Polynomial]:
        return self.file.polynomials()

    @cached_property
    def f(self) -> Polynomial | None:
        """The function whose partials define the problem (partials mode only)."""
        return self.sources[0] if self.mode == "partials" else None

    @cached_property
    def polys(self) -> list[Polynomial]:
        """The defining polynomials g_1..g_k."""
        if self.f is not None:
            return [partial_derivative(self.f, i) for i in range(self.n)]
        return list(self.sources)

    @property
    def k(self) -> int:
        return len(self.polys)

    @cached_property
    def polyhedron(self) -> NewtonPolyhedron:
        """
        Newton polyhedron (polytope in laurent mode) of g_1 ... g_k.

        In partials mode the filtration comes from f, so this is the Newton
        polyhedron of f.
        """
        if self.f is not None:
            if self.f.is_zero:
                raise ValueError("f is zero; no Newton polyhedron")
            return newton_polyhedron(self.f.support(), self.n)
        if any(g.is_zero for g in self.polys):
            raise ValueError("a defining polynomial is zero; no Newton polyhedron")
        return newton_polyhedron_of(self.polys, laurent=self.laurent)

    @cached_property
    def summands(self) -> list[NewtonPolyhedron]:
        """Newton polyhedra of the individual g_i."""
        build = newton_polytope if self.laurent else newton_polyhedron
        return [build(g.support(), self.n) for g in self.polys]

    @cached_property
    def convenient(self) -> bool:
        polys = [self.f] if self.f is not None else self.polys
        result = not self.laurent and is_convenient(polys)
        if not result and not self.laurent:
            self.warn("input is not convenient; filtration results need strictly positive normals")
        return result

    @cached_property
    def nu(self) -> NuMatrix:
        return nu_matrix(self.polys, self.polyhedron)

    @cached_property
    def m(self) -> int:
        return compute_m(
            self.polyhedron.normals,
            self.polyhedron.offsets,
            minimal=self.minimal_m,
            max_points=self.limits.max_basis * 4,
        )

    @cached_property
    def spec(self) -> FiltrationSpec:
        return FiltrationSpec(
            normals=self.polyhedron.normals,
            offsets=self.polyhedron.offsets,
            m=self.m,
            n=self.n,
        )

    @cached_property
    def fan(self) -> SimplicialFan:
        return build_fan(self.polyhedron.normals, self.n, self.polyhedron)

    @cached_property
    def fan_reverse(self) -> SimplicialFan:
        return build_fan(self.polyhedron.normals, self.n, self.polyhedron, order="reverse")

    @cached_property
    def rhos(self) -> list[int]:
        return [rho(self.spec, g) for g in self.polys]

    @property
    def r(self) -> int:
        return self.polyhedron.r

    def window(self, arity: int | None = None) -> Window:
        """The configured window as a cube of the given arity (r by default)."""
        return Window.cube(self.r if arity is None else arity, *self.bounds)

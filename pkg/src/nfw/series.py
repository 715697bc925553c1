"""Truncated formal series with integer coefficients on finite exponent windows."""

import itertools
import logging
import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from nfw.errors import NonPolynomialSeriesError, ResourceLimitError, WindowError

logger = logging.getLogger(__name__)

MultiIndex = tuple[int, ...]

_WINDOW = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


@dataclass(frozen=True)
class Window:
    """
    Integer box lo <= mu <= hi (componentwise).

    Args:
        lo: Lower corner
        hi: Upper corner
    """
    lo: MultiIndex
    hi: MultiIndex

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise ValueError("window corners must have the same length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise WindowError(f"empty window {self.lo}..{self.hi}")

    @classmethod
    def cube(cls, arity: int, lo: int, hi: int) -> "Window":
        return cls((lo,) * arity, (hi,) * arity)

    @classmethod
    def parse(cls, text: str, arity: int = 1) -> "Window":
        """Parse "LO..HI" into the cube [LO, HI]^arity."""
        match = _WINDOW.match(text)
        if not match:
            raise ValueError(f"window must look like LO..HI, got {text!r}")
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo > hi:
            raise ValueError(f"window lower bound {lo} exceeds upper bound {hi}")
        return cls.cube(arity, lo, hi)

    @property
    def arity(self) -> int:
        return len(self.lo)

    @property
    def size(self) -> int:
        total = 1
        for a, b in zip(self.lo, self.hi):
            total *= b - a + 1
        return total

    def __contains__(self, mu: object) -> bool:
        if not isinstance(mu, tuple) or len(mu) != self.arity:
            return False
        return all(a <= m <= b for a, m, b in zip(self.lo, mu, self.hi))

    def points(self) -> Iterator[MultiIndex]:
        """Lattice points in lexicographic order."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def intersect(self, other: "Window") -> "Window":
        if other.arity != self.arity:
            raise ValueError("windows of different arity")
        return Window(
            tuple(max(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(min(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def to_dict(self) -> dict[str, list[int]]:
        return {"lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class TruncatedSeries:
    """
    Series sum c_mu t^mu known exactly on a window.

    floor, when set, records that the series vanishes at every mu with some
    component below it; coefficients there are known to be 0 even outside the
    window. Coefficients elsewhere outside the window are unknown.
    """
    window: Window
    coefficients: Mapping[MultiIndex, int] = field(default_factory=dict)
    floor: int | None = None

    def __post_init__(self) -> None:
        kept = {mu: int(c) for mu, c in self.coefficients.items() if c != 0}
        outside = [mu for mu in kept if mu not in self.window]
        if outside:
            raise ValueError(f"coefficient at {outside[0]} lies outside the window")
        object.__setattr__(self, "coefficients", kept)

    @property
    def arity(self) -> int:
        return self.window.arity

    def known_zero(self, mu: MultiIndex) -> bool:
        return self.floor is not None and any(m < self.floor for m in mu)

    def coefficient(self, mu: Sequence[int]) -> int:
        """
        Coefficient at mu.

        Raises:
            WindowError: if mu is outside the window and not known to vanish
        """
        key = tuple(mu)
        if key in self.window:
            return self.coefficients.get(key, 0)
        if self.known_zero(key):
            return 0
        raise WindowError(f"coefficient at {key} is outside the window {self.window.lo}..{self.window.hi}")

    def __getitem__(self, mu: Sequence[int]) -> int:
        return self.coefficient(mu)

    def items(self) -> Iterator[tuple[MultiIndex, int]]:
        """All window points with their coefficients, in lexicographic order."""
        for mu in self.window.points():
            yield mu, self.coefficients.get(mu, 0)

    def restrict(self, window: Window) -> "TruncatedSeries":
        inner = self.window.intersect(window)
        return TruncatedSeries(
            inner,
            {mu: c for mu, c in self.coefficients.items() if mu in inner},
            self.floor,
        )

    def to_list(self) -> list[int]:
        """Coefficients in window order (one-variable series read naturally)."""
        return [c for _, c in self.items()]

    def to_dict(self) -> dict[str, Any]:
        return {
            "arity": self.arity,
            "window": self.window.to_dict(),
            "floor": self.floor,
            "terms": [[list(mu), c] for mu, c in sorted(self.coefficients.items())],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TruncatedSeries":
        window = Window(tuple(data["window"]["lo"]), tuple(data["window"]["hi"]))
        return cls(
            window,
            {tuple(mu): int(c) for mu, c in data["terms"]},
            data.get("floor"),
        )


def _check_size(window: Window, max_points: int) -> None:
    if window.size > max_points:
        raise ResourceLimitError(f"window of {window.size} points exceeds limit {max_points}")


def geometric_inverse(p: Sequence[int], window: Window) -> TruncatedSeries:
    """1 / (1 - t^p) for nonzero p with nonnegative entries."""
    step = tuple(p)
    if any(x < 0 for x in step) or not any(step):
        raise ValueError(f"geometric inverse needs a nonzero nonnegative exponent, got {step}")
    coefficients = {}
    k = 0
    while True:
        mu = tuple(k * x for x in step)
        if any(m > h for m, h in zip(mu, window.hi)):
            break
        if mu in window:
            coefficients[mu] = 1
        k += 1
    return TruncatedSeries(window, coefficients, floor=0)


def ambient_poincare(
    columns: Sequence[Sequence[int]],
    window: Window,
    max_points: int = 1_000_000,
) -> TruncatedSeries:
    """
    Product of 1 / (1 - t^{p^l}) over the columns p^l.

    The coefficient at mu counts q in N^n with <p_j, q> = mu_j for every j.
    Computed by one pass per column over the nonnegative part of the window.
    """
    for column in columns:
        if any(x < 0 for x in column) or not any(column):
            raise ValueError(f"columns must be nonzero and nonnegative, got {tuple(column)}")
    if any(h < 0 for h in window.hi):
        return TruncatedSeries(window, {}, floor=0)
    full = Window((0,) * window.arity, window.hi)
    _check_size(full, max_points)
    values: dict[MultiIndex, int] = {(0,) * window.arity: 1}
    for column in columns:
        step = tuple(column)
        updated: dict[MultiIndex, int] = {}
        for mu in full.points():
            below = tuple(m - s for m, s in zip(mu, step))
            total = values.get(mu, 0) + updated.get(below, 0)
            if total:
                updated[mu] = total
        values = updated
    return TruncatedSeries(window, {mu: c for mu, c in values.items() if mu in window}, floor=0)


def mul_factor(series: TruncatedSeries, nu: Sequence[int]) -> TruncatedSeries:
    """
    Multiply by (1 - t^nu).

    The result is exact where mu - nu is known: the lower corner moves up by nu
    in each coordinate unless the series is known to vanish below it.
    """
    step = tuple(nu)
    if len(step) != series.arity:
        raise ValueError(f"factor exponent {step} does not have arity {series.arity}")
    lo = tuple(
        a if series.floor is not None and a <= series.floor else a + s
        for a, s in zip(series.window.lo, step)
    )
    window = Window(lo, series.window.hi)
    coefficients = {}
    for mu in window.points():
        value = series.coefficient(mu) - series.coefficient(tuple(m - s for m, s in zip(mu, step)))
        if value:
            coefficients[mu] = value
    return TruncatedSeries(window, coefficients, series.floor)


def mul_factors(series: TruncatedSeries, nus: Sequence[Sequence[int]]) -> TruncatedSeries:
    """Multiply by the product of (1 - t^nu) over nus."""
    for nu in nus:
        series = mul_factor(series, nu)
    return series


def _lookup(series: TruncatedSeries, mu: MultiIndex) -> int:
    # L vanishes where every component is negative
    if all(m < 0 for m in mu):
        return 0
    return series.coefficient(mu)


def p_from_l(l_series: TruncatedSeries, window: Window | None = None) -> TruncatedSeries:
    """
    P = (t_1 - 1)...(t_r - 1) / (t_1...t_r - 1) * L.

    With K = (t_1 - 1)...(t_r - 1) L, P(mu) = -sum_{m=0}^{max mu} K(mu - m*1);
    P vanishes below 0. Output at mu needs L down to mu_j - max_k mu_k - 1, so an
    L window [lo, hi] yields P on [0, min(hi, -max(lo) - 1)] unless a smaller
    window is requested.

    Raises:
        WindowError: if L does not reach far enough for the output window
    """
    r = l_series.arity
    if window is None:
        reach = -max(l_series.window.lo) - 1
        hi = tuple(min(h, reach) for h in l_series.window.hi)
        if any(h < 0 for h in hi):
            raise WindowError("L window does not reach far enough below zero to produce P")
        window = Window((0,) * r, hi)
    corners = list(itertools.product((0, 1), repeat=r))

    def k_value(nu: MultiIndex) -> int:
        total = 0
        for eps in corners:
            sign = -1 if (r - sum(eps)) % 2 else 1
            total += sign * _lookup(l_series, tuple(a - e for a, e in zip(nu, eps)))
        return total

    coefficients = {}
    for mu in window.points():
        if min(mu) < 0:
            continue
        value = -sum(k_value(tuple(x - m for x in mu)) for m in range(max(mu) + 1))
        if value:
            coefficients[mu] = value
    return TruncatedSeries(window, coefficients, floor=0)


def l_from_p(p_series: TruncatedSeries, window: Window | None = None) -> TruncatedSeries:
    """
    L = (t_1...t_r - 1) / ((t_1 - 1)...(t_r - 1)) * P, expanded in nonnegative powers.

    Needs a series supported in N^r (floor 0); the result is supported there too.
    """
    if p_series.floor != 0:
        raise WindowError("L_from_P needs a series known to vanish below 0")
    r = p_series.arity
    window = window or Window(tuple(max(a, 0) for a in p_series.window.lo), p_series.window.hi)
    sign = -1 if r % 2 else 1
    ones = (1,) * r
    coefficients = {}
    for mu in window.points():
        if min(mu) < 0:
            continue
        total = 0
        for m in itertools.product(*(range(x + 1) for x in mu)):
            rest = tuple(a - b for a, b in zip(mu, m))
            total += p_series.coefficient(tuple(a - b for a, b in zip(rest, ones)))
            total -= p_series.coefficient(rest)
        if total:
            coefficients[mu] = sign * total
    return TruncatedSeries(window, coefficients, floor=0)


def diagonal(series: TruncatedSeries) -> TruncatedSeries:
    """One-variable series of the coefficients at (l, ..., l)."""
    lo = max(series.window.lo)
    hi = min(series.window.hi)
    if lo > hi:
        raise WindowError("window does not meet the diagonal")
    window = Window((lo,), (hi,))
    coefficients = {(l,): series.coefficient((l,) * series.arity) for l in range(lo, hi + 1)}
    return TruncatedSeries(window, coefficients, series.floor)


def sum_of_coefficients(series: TruncatedSeries, bound: int) -> int:
    """
    Value at 1 of a one-variable series that is a polynomial of degree < bound.

    Raises:
        WindowError: if the window cannot show the series vanishes from bound on
        NonPolynomialSeriesError: if a coefficient at l >= bound is nonzero
    """
    if series.arity != 1:
        raise ValueError("sum_of_coefficients needs a one-variable series")
    if series.floor is None or series.window.lo[0] > series.floor:
        raise WindowError("series is not known below its window")
    if series.window.hi[0] < bound:
        raise WindowError(f"window ends at {series.window.hi[0]}, before the degree bound {bound}")
    tail = [(mu[0], c) for mu, c in series.coefficients.items() if mu[0] >= bound]
    if tail:
        degree, value = min(tail)
        raise NonPolynomialSeriesError(f"nonzero coefficient {value} at degree {degree} >= {bound}")
    return sum(series.coefficients.values())


def first_discrepancy(
    left: TruncatedSeries,
    right: TruncatedSeries,
    window: Window | None = None,
) -> tuple[MultiIndex, int, int] | None:
    """First mu (lexicographically) on the common window where the series differ."""
    common = left.window.intersect(right.window)
    if window is not None:
        common = common.intersect(window)
    for mu in common.points():
        a, b = left.coefficient(mu), right.coefficient(mu)
        if a != b:
            return mu, a, b
    return None


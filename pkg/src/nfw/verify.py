"""Verification driver: each identity compares two sides computed by separate modules."""

import logging
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from nfw.artin import (
    bar_dim,
    bar_dim_one_index,
    induced_dim,
    induced_dim_one_index,
    quotient_total_dim,
    thm14_equal,
)
from nfw.errors import NfwError, NonPolynomialSeriesError, ResourceLimitError
from nfw.fan import h_mu
from nfw.hypotheses import HypothesisReport, Verdict, run_check
from nfw.lattice import ambient_columns, l_direct, lemma33_report, p_hat_direct
from nfw.newton import newton_number
from nfw.problem import Problem
from nfw.reports import IdentityResult, SeriesModel
from nfw.series import (
    TruncatedSeries,
    Window,
    ambient_poincare,
    first_discrepancy,
    mul_factors,
    p_from_l,
    sum_of_coefficients,
)
from nfw.toric import l_toric

logger = logging.getLogger(__name__)

OnIdentityHook = Callable[[str, IdentityResult, float], None]
OnErrorHook = Callable[[str, str, Exception, float], None]


def _noop_on_identity(problem_name: str, result: IdentityResult, duration_ms: float) -> None:
    """Default no-op hook for identity results."""
    pass


def _noop_on_error(problem_name: str, identity: str, error: Exception, duration_ms: float) -> None:
    """Default no-op hook for errors."""
    pass


@dataclass
class VerifierMetrics:
    """Counts of identity outcomes."""
    identities_equal: int = 0
    identities_differ: int = 0
    identities_gated: int = 0
    identities_skipped: int = 0
    errors: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "identities_equal": self.identities_equal,
            "identities_differ": self.identities_differ,
            "identities_gated": self.identities_gated,
            "identities_skipped": self.identities_skipped,
            "errors": self.errors,
        }


IDENTITIES = (
    "p-from-l",
    "thm1.1",
    "lemma1.3",
    "thm2.4b",
    "thm2.7b",
    "thm1.4",
    "thm2.5",
    "thm2.5-fan-independence",
    "lemma3.3",
    "lemma3.3-diagonal",
    "lemma3.2b",
    "thm3.4a",
    "thm3.4b",
    "remark3.4b",
    "kushnirenko",
)


class _Skip(Exception):
    """The identity does not apply to this problem."""


@dataclass
class _Run:
    """Per-problem state shared by the identities of one verification run."""
    problem: Problem
    gates: dict[str, HypothesisReport] = field(default_factory=dict)
    cache: dict[Any, Any] = field(default_factory=dict)

    def gate(self, check: str) -> str:
        if check not in self.gates:
            self.gates[check] = run_check(check, self.problem)
        return self.gates[check].verdict.value

    def cached(self, key: Any, compute: Callable[[], Any]) -> Any:
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]


def _discrepancy(mismatch: tuple[tuple[int, ...], int, int] | None) -> dict[str, Any] | None:
    if mismatch is None:
        return None
    mu, a, b = mismatch
    return {"mu": list(mu), "left": a, "right": b}


def _result(
    name: str,
    agree: bool,
    left: TruncatedSeries | int,
    right: TruncatedSeries | int,
    left_source: str,
    right_source: str,
    gate: str | None = None,
    gate_verdict: str | None = None,
    counted: bool = True,
    mismatch: dict[str, Any] | None = None,
    note: str | None = None,
) -> IdentityResult:
    gated = gate is not None and gate_verdict != Verdict.PASS.value
    if gated:
        status = "gated"
        side_note = "sides agree" if agree else "sides differ"
        note = f"hypothesis {gate} is {gate_verdict}; {side_note}"
    else:
        status = "equal" if agree else "differs"
    return IdentityResult(
        name=name,
        status=status,
        counted=counted and not gated,
        gate=gate,
        gate_verdict=gate_verdict,
        left=SeriesModel.from_series(left) if isinstance(left, TruncatedSeries) else left,
        right=SeriesModel.from_series(right) if isinstance(right, TruncatedSeries) else right,
        left_source=left_source,
        right_source=right_source,
        first_discrepancy=mismatch,
        note=note,
    )


def _series_result(
    name: str,
    left: TruncatedSeries,
    right: TruncatedSeries,
    left_source: str,
    right_source: str,
    **options: Any,
) -> IdentityResult:
    mismatch = first_discrepancy(left, right)
    return _result(
        name, mismatch is None, left, right, left_source, right_source,
        mismatch=_discrepancy(mismatch), **options,
    )


class Verifier:
    """
    Runs identity checks on problems.

    Args:
        identities: Names to run, in order (all by default)
        toric_csv: Optional CSV dump path for the toric counts of thm2.5
        on_identity: Hook called after each identity
        on_error: Hook called when an identity cannot be computed
    """

    def __init__(
        self,
        identities: Sequence[str] | None = None,
        toric_csv: Path | None = None,
        on_identity: OnIdentityHook | None = None,
        on_error: OnErrorHook | None = None,
    ):
        chosen = list(identities) if identities is not None else list(IDENTITIES)
        unknown = [name for name in chosen if name not in IDENTITIES]
        if unknown:
            raise ValueError(f"unknown identity {unknown[0]!r}; known: {', '.join(IDENTITIES)}")
        self.identities = chosen
        self.toric_csv = toric_csv

        # Observability hooks (default to no-op)
        self.on_identity = on_identity or _noop_on_identity
        self.on_error = on_error or _noop_on_error

        self.metrics = VerifierMetrics()
        self._handlers: dict[str, Callable[[_Run], IdentityResult]] = {
            "p-from-l": self._p_from_l,
            "thm1.1": self._thm11,
            "lemma1.3": self._lemma13,
            "thm2.4b": self._thm24b,
            "thm2.7b": self._thm27b,
            "thm1.4": self._thm14,
            "thm2.5": self._thm25,
            "thm2.5-fan-independence": self._fan_independence,
            "lemma3.3": self._lemma33,
            "lemma3.3-diagonal": self._lemma33_diagonal,
            "lemma3.2b": self._lemma32b,
            "thm3.4a": self._thm34a,
            "thm3.4b": self._thm34b,
            "remark3.4b": self._remark34b,
            "kushnirenko": self._kushnirenko,
        }

    def run(self, problem: Problem, problem_name: str = "problem") -> tuple[list[IdentityResult], dict[str, HypothesisReport]]:
        """
        Verify every selected identity.

        Returns:
            The identity results in order, and the hypothesis reports used as gates
        """
        state = _Run(problem)
        results = [self.verify_identity(state, name, problem_name) for name in self.identities]
        return results, state.gates

    def verify_identity(self, state: _Run, identity: str, problem_name: str = "problem") -> IdentityResult:
        start_time = time.perf_counter()
        try:
            result = self._handlers[identity](state)
        except _Skip as skip:
            result = IdentityResult(name=identity, status="skipped", counted=False, note=str(skip))
        except (NfwError, ValueError, KeyError) as e:
            duration_ms = (time.perf_counter() - start_time) * 1000
            logger.error(f"{problem_name}: identity {identity} failed: {e}")
            self.metrics.errors += 1
            try:
                self.on_error(problem_name, identity, e, duration_ms)
            except Exception as hook_error:
                logger.warning(f"Error hook failed: {hook_error}")
            return IdentityResult(
                name=identity,
                status="error",
                counted=False,
                note=f"{type(e).__name__}: {e}",
            )

        duration_ms = (time.perf_counter() - start_time) * 1000
        if result.status == "equal":
            self.metrics.identities_equal += 1
        elif result.status == "differs":
            self.metrics.identities_differ += 1
            logger.warning(f"{problem_name}: identity {identity} differs at {result.first_discrepancy}")
        elif result.status == "gated":
            self.metrics.identities_gated += 1
        else:
            self.metrics.identities_skipped += 1
        logger.info(f"{problem_name}: {identity} {result.status} ({duration_ms:.1f} ms)")

        try:
            self.on_identity(problem_name, result, duration_ms)
        except Exception as hook_error:
            logger.warning(f"Identity hook failed: {hook_error}")
        return result

    # Shared pieces

    @staticmethod
    def _germ(state: _Run) -> Problem:
        problem = state.problem
        if problem.laurent:
            raise _Skip("filtration identities need germ or partials mode")
        return problem

    @staticmethod
    def _check_size(state: _Run, window: Window) -> Window:
        limit = state.problem.limits.max_window_points
        if window.size > limit:
            raise ResourceLimitError(f"window of {window.size} points exceeds limit {limit}")
        return window

    def _window(self, state: _Run) -> Window:
        """The configured window clipped to N^r."""
        problem = self._germ(state)
        lo, hi = problem.bounds
        return self._check_size(state, Window.cube(problem.r, max(lo, 0), hi))

    def _l_direct(self, state: _Run, window: Window) -> TruncatedSeries:
        self._check_size(state, window)
        return state.cached(("L", window), lambda: l_direct(state.problem.spec, window))

    def _product_side(self, state: _Run) -> TruncatedSeries:
        """prod (1 - t^{nu_i}) * L_direct on the clipped window."""
        window = self._window(state)
        total = state.problem.nu.total()
        extended = Window(tuple(a - t for a, t in zip(window.lo, total)), window.hi)
        return mul_factors(self._l_direct(state, extended), state.problem.nu.rows)

    def _one_index_window(self, state: _Run) -> Window:
        lo, hi = self._germ(state).bounds
        return Window((max(lo, 0),), (hi,))

    def _q_hat(self, state: _Run, top: int) -> TruncatedSeries:
        problem = state.problem
        p_hat = state.cached(("P-hat", top), lambda: p_hat_direct(problem.spec, Window((0,), (top,))))
        return mul_factors(p_hat, [(rho,) for rho in problem.rhos])

    def _complete_intersection(self, state: _Run) -> Problem:
        problem = self._germ(state)
        if problem.k != problem.n:
            raise _Skip(f"needs k = n, got k = {problem.k}, n = {problem.n}")
        return problem

    # Identities

    def _p_from_l(self, state: _Run) -> IdentityResult:
        window = self._window(state)
        problem = state.problem
        reach = max(window.hi) + 1
        below = Window(tuple(-reach for _ in window.lo), window.hi)
        left = p_from_l(self._l_direct(state, below), window)
        right = ambient_poincare(ambient_columns(problem.spec), window)
        return _series_result("p-from-l", left, right, "lattice.l_direct", "series.ambient_poincare")

    def _thm11(self, state: _Run) -> IdentityResult:
        window = self._window(state)
        problem = state.problem
        left = TruncatedSeries(window, {mu: induced_dim(problem.spec, mu, problem.polys) for mu in window.points()})
        return _series_result(
            "thm1.1", left, self._product_side(state), "artin.induced_dim", "lattice.l_direct",
            gate="thm1.1", gate_verdict=state.gate("thm1.1"),
        )

    def _lemma13(self, state: _Run) -> IdentityResult:
        window = self._window(state)
        problem = state.problem
        left = TruncatedSeries(
            window, {mu: bar_dim(problem.spec, mu, problem.polys, problem.nu.rows) for mu in window.points()}
        )
        # F-bar at indices with some mu_j < nu_j is not the graded object of the lemma when r > 1
        single = problem.r == 1
        return _series_result(
            "lemma1.3", left, self._product_side(state), "artin.bar_dim", "lattice.l_direct",
            gate="lemma1.3", gate_verdict=state.gate("lemma1.3"),
            counted=single,
            note=None if single else f"compared on all points; exact for r = 1, here r = {problem.r}",
        )

    def _thm24b(self, state: _Run) -> IdentityResult:
        """P-tilde from prod (1 - t^{nu_i}) L against prod (1 - t^{nu_i}) P."""
        window = self._window(state)
        problem = state.problem
        reach = max(window.hi) + 1
        total = problem.nu.total()
        below = Window(tuple(-reach - t for t in total), window.hi)
        l_tilde = mul_factors(self._l_direct(state, below), problem.nu.rows)
        left = p_from_l(l_tilde, window)
        ambient = ambient_poincare(ambient_columns(problem.spec), Window.cube(problem.r, 0, max(window.hi)))
        right = mul_factors(ambient, problem.nu.rows).restrict(window)
        return _series_result(
            "thm2.4b", left, right, "lattice.l_direct", "series.ambient_poincare",
            gate="lemma2.3", gate_verdict=state.gate("lemma2.3"),
        )

    def _thm27b(self, state: _Run) -> IdentityResult:
        window = self._window(state)
        problem = state.problem
        right = self._product_side(state)
        total = problem.nu.total()
        compared = [
            mu for mu in window.points()
            if h_mu(problem.fan, [m - t for m, t in zip(mu, total)]).is_convex()
        ]
        left = TruncatedSeries(
            window, {mu: bar_dim(problem.spec, mu, problem.polys, problem.nu.rows) for mu in window.points()}
        )
        mismatch = next(
            ((mu, left[mu], right[mu]) for mu in compared if left[mu] != right[mu]), None
        )
        return _result(
            "thm2.7b", mismatch is None, left, right, "artin.bar_dim", "lattice.l_direct",
            gate="lemma2.3", gate_verdict=state.gate("lemma2.3"),
            mismatch=_discrepancy(mismatch),
            note=f"compared at {len(compared)} of {window.size} points where h is convex",
        )

    def _thm14(self, state: _Run) -> IdentityResult:
        window = self._window(state)
        problem = state.problem
        unequal = [mu for mu in window.points() if not thm14_equal(problem.spec, mu, problem.polys)]
        mismatch = {"mu": list(unequal[0])} if unequal else None
        return _result(
            "thm1.4", not unequal, window.size - len(unequal), window.size,
            "artin.thm14_equal", "window size",
            gate="thm1.4", gate_verdict=state.gate("thm1.4"),
            mismatch=mismatch,
        )

    def _toric(self, state: _Run, reverse: bool) -> TruncatedSeries:
        problem = state.problem
        window = self._window(state)
        fan = problem.fan_reverse if reverse else problem.fan
        csv_path = None if reverse else self.toric_csv
        return state.cached(
            ("toric", reverse),
            lambda: l_toric(problem.polyhedron.normals, fan, window, problem.limits.max_toric_radius, csv_path),
        )

    def _thm25(self, state: _Run) -> IdentityResult:
        left = self._toric(state, reverse=False)
        right = self._l_direct(state, self._window(state))
        return _series_result("thm2.5", left, right, "toric.l_toric", "lattice.l_direct")

    def _fan_independence(self, state: _Run) -> IdentityResult:
        left = self._toric(state, reverse=False)
        right = self._toric(state, reverse=True)
        return _series_result(
            "thm2.5-fan-independence", left, right, "toric.l_toric forward", "toric.l_toric reverse",
            counted=False,
        )

    def _lemma33_report(self, state: _Run) -> Any:
        window = self._one_index_window(state)
        return state.cached("lemma3.3", lambda: lemma33_report(state.problem.spec, window))

    def _lemma33(self, state: _Run) -> IdentityResult:
        report = self._lemma33_report(state)
        comparison = report.psi_vs_levels
        mismatch = comparison.first_mismatch
        return _result(
            "lemma3.3", comparison.equal, report.psi_counts, report.level_counts,
            "lattice.p_hat_direct", "lattice.m_l_count",
            counted=report.offsets_equal_m,
            mismatch={"mu": [mismatch[0]], "left": mismatch[1], "right": mismatch[2]} if mismatch else None,
            note=None if report.offsets_equal_m else "offsets differ from M; reported only",
        )

    def _lemma33_diagonal(self, state: _Run) -> IdentityResult:
        report = self._lemma33_report(state)
        comparison = report.psi_vs_diagonal
        mismatch = comparison.first_mismatch
        return _result(
            "lemma3.3-diagonal", comparison.equal, report.psi_counts, report.diagonal,
            "lattice.p_hat_direct", "series.ambient_poincare diagonal",
            counted=False,
            mismatch={"mu": [mismatch[0]], "left": mismatch[1], "right": mismatch[2]} if mismatch else None,
        )

    def _lemma32b(self, state: _Run) -> IdentityResult:
        window = self._one_index_window(state)
        problem = state.problem
        levels = range(window.lo[0], window.hi[0] + 1)
        left = TruncatedSeries(
            window, {(l,): bar_dim_one_index(problem.spec, l, problem.polys, problem.rhos) for l in levels}
        )
        right = TruncatedSeries(
            window, {(l,): induced_dim_one_index(problem.spec, l, problem.polys) for l in levels}
        )
        return _series_result(
            "lemma3.2b", left, right, "artin.bar_dim_one_index", "artin.induced_dim_one_index",
            gate="lemma2.3-one-index", gate_verdict=state.gate("lemma2.3-one-index"),
        )

    def _thm34a(self, state: _Run) -> IdentityResult:
        window = self._one_index_window(state)
        problem = state.problem
        levels = range(window.lo[0], window.hi[0] + 1)
        left = TruncatedSeries(
            window, {(l,): induced_dim_one_index(problem.spec, l, problem.polys) for l in levels}
        )
        right = self._q_hat(state, window.hi[0]).restrict(window)
        return _series_result(
            "thm3.4a", left, right, "artin.induced_dim_one_index", "lattice.p_hat_direct",
            gate="lemma2.3-one-index", gate_verdict=state.gate("lemma2.3-one-index"),
        )

    def _thm34b(self, state: _Run) -> IdentityResult:
        problem = self._complete_intersection(state)
        bound = sum(problem.rhos)
        q_hat = self._q_hat(state, max(problem.bounds[1], bound))
        right = quotient_total_dim(problem.polys, problem.limits.max_quotient_depth)
        gate_verdict = state.gate("lemma2.3-one-index")
        try:
            left = sum_of_coefficients(q_hat, bound)
        except NonPolynomialSeriesError as e:
            if gate_verdict == Verdict.PASS.value:
                raise
            return IdentityResult(
                name="thm3.4b",
                status="gated",
                counted=False,
                gate="lemma2.3-one-index",
                gate_verdict=gate_verdict,
                left=SeriesModel.from_series(q_hat),
                right=right,
                left_source="lattice.p_hat_direct",
                right_source="artin.quotient_total_dim",
                note=f"hypothesis lemma2.3-one-index is {gate_verdict}; {e}",
            )
        return _result(
            "thm3.4b", left == right, left, right, "lattice.p_hat_direct", "artin.quotient_total_dim",
            gate="lemma2.3-one-index", gate_verdict=gate_verdict,
        )

    def _remark34b(self, state: _Run) -> IdentityResult:
        problem = self._complete_intersection(state)
        bound = sum(problem.rhos)
        top = max(problem.bounds[1], bound)
        tail = Window((bound,), (top,))
        left = self._q_hat(state, top).restrict(tail)
        right = TruncatedSeries(tail, {}, floor=None)
        return _series_result(
            "remark3.4b", left, right, "lattice.p_hat_direct", "zero",
            gate="lemma2.3-one-index", gate_verdict=state.gate("lemma2.3-one-index"),
        )

    def _kushnirenko(self, state: _Run) -> IdentityResult:
        problem = state.problem
        if problem.f is None:
            raise _Skip("needs partials mode")
        left = quotient_total_dim(problem.polys, problem.limits.max_quotient_depth)
        right = newton_number(problem.polyhedron)
        return _result(
            "kushnirenko", left == right, left, right, "artin.quotient_total_dim", "newton.newton_number",
            gate="kushnirenko", gate_verdict=state.gate("kushnirenko"),
        )


def resource_limited(results: Sequence[IdentityResult]) -> bool:
    """True if some identity was aborted by a resource cap."""
    return any(r.status == "error" and (r.note or "").startswith("ResourceLimitError") for r in results)

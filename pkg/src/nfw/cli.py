"""Command-line front-end: nfw <command> <file> [options]."""

import argparse
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from nfw import __version__
from nfw.errors import ResourceLimitError
from nfw.hypotheses import CHECKS, HypothesisReport, Verdict, run_check
from nfw.lattice import ambient_columns, l_direct, p_hat_direct
from nfw.newton import bistellar_witnesses, is_full, newton_number
from nfw.problem import Problem, parse_problem_file
from nfw.reports import (
    FanModel,
    HypothesisModel,
    PolyhedronModel,
    Report,
    SeriesModel,
    input_digest,
)
from nfw.series import TruncatedSeries, Window, ambient_poincare, mul_factors, sum_of_coefficients
from nfw.toric import l_toric
from nfw.verify import Verifier, resource_limited

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

COMMANDS = ("polyhedron", "series", "check", "verify", "fan")
SERIES_KINDS = ("ambient", "ci", "one-index", "toric-L", "lattice-L")

GERM_CHECKS = ("thm1.1", "lemma1.3", "thm1.4", "lemma2.2", "lemma2.3", "nondegenerate")
PARTIALS_CHECKS = GERM_CHECKS + ("lemma2.3-one-index", "kushnirenko")
LAURENT_CHECKS = ("section4",)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfw",
        description="Newton filtrations: polyhedra, Poincare series, hypothesis checks and identity verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("file", type=Path, help="problem file")
    parser.add_argument("--window", help="series window LO..HI (overrides the file)")
    parser.add_argument("--minimal-M", dest="minimal_m", action="store_true", default=None,
                        help="search for the least integrality constant M")
    parser.add_argument("--fan-dump", type=Path, help="write the fan as JSON to this path")
    parser.add_argument("--checks", help="comma- or space-separated check names")
    parser.add_argument("--which", choices=SERIES_KINDS, default="ci", help="series to compute")
    parser.add_argument("--toric-csv", type=Path, help="write toric counts as CSV (series toric-L, verify)")
    parser.add_argument("--json", action="store_true", help="print the full JSON report")
    parser.add_argument("--otel", action="store_true", help="record verification telemetry")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def _split_names(text: str) -> list[str]:
    return text.replace(",", " ").split()


def _check_names(args: argparse.Namespace, problem: Problem) -> list[str]:
    if args.checks:
        names = _split_names(args.checks)
    elif problem.file.checks:
        names = list(problem.file.checks)
    elif problem.laurent:
        names = list(LAURENT_CHECKS)
    elif problem.mode == "partials":
        names = list(PARTIALS_CHECKS)
    else:
        names = list(GERM_CHECKS)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check {unknown[0]!r}; known: {', '.join(CHECKS)}")
    return names


def _check_window(problem: Problem, window: Window) -> Window:
    if window.size > problem.limits.max_window_points:
        raise ResourceLimitError(f"window of {window.size} points exceeds limit {problem.limits.max_window_points}")
    return window


def cmd_polyhedron(problem: Problem, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    polyhedron = problem.polyhedron
    results: dict[str, Any] = {
        "polyhedron": PolyhedronModel.from_polyhedron(polyhedron).model_dump(),
        "r": polyhedron.r,
        "convenient": problem.convenient,
        "full": is_full(polyhedron),
    }
    if not problem.laurent:
        witnesses = bistellar_witnesses(polyhedron)
        results["bistellar"] = not witnesses
        results["bistellar_witnesses"] = [list(pair) for pair in witnesses]
        results["nu"] = problem.nu.to_list()
    if problem.convenient:
        results["M"] = problem.m
        results["rho"] = problem.rhos
        results["newton_number"] = newton_number(polyhedron)
    return results, EXIT_OK


def _gate_warning(problem: Problem, check: str, results: dict[str, Any]) -> None:
    verdict = run_check(check, problem).verdict
    results["hypothesis"] = {"check": check, "verdict": verdict.value}
    if verdict is not Verdict.PASS:
        results["unverified_hypothesis"] = True
        problem.warn(f"hypothesis {check} is {verdict.value}; series is unverified")


def cmd_series(problem: Problem, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    if problem.laurent:
        raise ValueError("series need germ or partials mode")
    lo, hi = problem.bounds
    which = args.which
    results: dict[str, Any] = {"which": which}
    series: TruncatedSeries
    if which == "ambient":
        window = _check_window(problem, problem.window())
        series = ambient_poincare(ambient_columns(problem.spec), window)
        results["source"] = "product of 1/(1 - t^{p^l}) over the columns"
    elif which == "ci":
        window = _check_window(problem, problem.window())
        ambient = ambient_poincare(ambient_columns(problem.spec), window)
        series = mul_factors(ambient, problem.nu.rows)
        results["source"] = "prod (1 - t^{nu_i}) times the ambient Poincare series"
        _gate_warning(problem, "thm1.1", results)
    elif which == "one-index":
        window = Window((0,), (max(hi, 0),))
        series = mul_factors(p_hat_direct(problem.spec, window), [(rho,) for rho in problem.rhos])
        results["source"] = "prod (1 - tau^{rho_i}) times the one-index Poincare series"
        results["rho"] = problem.rhos
        bound = sum(problem.rhos)
        if hi >= bound:
            try:
                results["value_at_1"] = sum_of_coefficients(series, bound)
            except ValueError as e:
                problem.warn(f"one-index series: {e}")
        _gate_warning(problem, "lemma2.3-one-index", results)
    elif which == "toric-L":
        window = _check_window(problem, Window.cube(problem.r, max(lo, 0), hi))
        series = l_toric(
            problem.polyhedron.normals, problem.fan, window, problem.limits.max_toric_radius, args.toric_csv
        )
        results["source"] = "Euler characteristics over the cones of the fan"
    else:
        window = _check_window(problem, problem.window())
        series = l_direct(problem.spec, window)
        results["source"] = "direct lattice-point count"
    results["series"] = SeriesModel.from_series(series).model_dump()
    return results, EXIT_OK


def _aggregate_exit(reports: Sequence[HypothesisReport]) -> int:
    verdicts = {report.verdict for report in reports}
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if Verdict.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_check(problem: Problem, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    reports = [run_check(name, problem) for name in _check_names(args, problem)]
    results = {
        "checks": [HypothesisModel.from_report(report).model_dump() for report in reports],
        "verdict": {report.name: report.verdict.value for report in reports},
    }
    return results, _aggregate_exit(reports)


def cmd_verify(problem: Problem, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    on_identity = on_error = None
    if args.otel:
        from nfw.otel import create_otel_hooks

        on_identity, on_error = create_otel_hooks()
    verifier = Verifier(toric_csv=args.toric_csv, on_identity=on_identity, on_error=on_error)
    identities, gates = verifier.run(problem, problem_name=args.file.name)
    results = {
        "identities": [result.model_dump() for result in identities],
        "hypotheses": {name: HypothesisModel.from_report(report).model_dump() for name, report in sorted(gates.items())},
        "metrics": verifier.metrics.to_dict(),
    }
    if any(result.failed for result in identities):
        return results, EXIT_FAIL
    if resource_limited(identities):
        return results, EXIT_INCONCLUSIVE
    return results, EXIT_OK


def cmd_fan(problem: Problem, args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    results = {
        "fan": FanModel.from_fan(problem.fan).model_dump(),
        "fan_reverse": FanModel.from_fan(problem.fan_reverse).model_dump(),
        "walls": len(problem.fan.walls()),
    }
    return results, EXIT_OK


HANDLERS = {
    "polyhedron": cmd_polyhedron,
    "series": cmd_series,
    "check": cmd_check,
    "verify": cmd_verify,
    "fan": cmd_fan,
}


def _options(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "window": args.window,
        "minimal_M": args.minimal_m,
        "which": args.which if args.command == "series" else None,
        "checks": args.checks,
    }


def _summary(report: Report) -> str:
    lines = [f"nfw {report.command}: {report.input_digest[:12]}"]
    for key, value in report.results.items():
        if isinstance(value, (int, float, str, bool)) or value is None:
            lines.append(f"  {key}: {value}")
        elif key == "verdict":
            lines.extend(f"  {name}: {verdict}" for name, verdict in value.items())
        elif key == "series":
            lines.append(f"  series: {value['coefficients'] if value['coefficients'] is not None else value['terms']}")
        elif key == "identities":
            lines.extend(f"  {item['name']}: {item['status']}" for item in value)
    lines.extend(f"  warning: {warning}" for warning in report.warnings)
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and print its report; returns the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    start_time = time.perf_counter()
    try:
        text = args.file.read_text()
        problem_file = parse_problem_file(text)
        window = None
        if args.window:
            parsed = Window.parse(args.window)
            window = (parsed.lo[0], parsed.hi[0])
        problem = Problem(problem_file, window=window, minimal_m=args.minimal_m)
        results, code = HANDLERS[args.command](problem, args)
        if args.fan_dump is not None:
            args.fan_dump.write_text(FanModel.from_fan(problem.fan).model_dump_json(indent=2))
            logger.info(f"wrote fan to {args.fan_dump}")
    except ResourceLimitError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (OSError, ValueError, KeyError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    report = Report(
        command=args.command,
        input_digest=input_digest(text, __version__, args.command, _options(args)),
        version=__version__,
        options=_options(args),
        results=results,
        warnings=list(problem.warnings),
        timing_ms=round((time.perf_counter() - start_time) * 1000, 3),
    )
    print(report.to_json() if args.json else _summary(report))
    return code


def main() -> None:
    sys.exit(run())

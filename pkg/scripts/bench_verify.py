#!/usr/bin/env python3
"""Time each identity of the verification driver on the bundled problems."""

import argparse
import time
from collections import defaultdict
from pathlib import Path

from nfw import Problem, Verifier
from nfw.reports import IdentityResult

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def percentile(values: list[float], q: float) -> float:
    ordered = sorted(values)
    return ordered[min(len(ordered) - 1, int(len(ordered) * q))]


def measure(path: Path, rounds: int) -> dict[str, list[float]]:
    """Run every identity `rounds` times on a fresh Problem and collect durations."""
    durations: dict[str, list[float]] = defaultdict(list)
    statuses: dict[str, str] = {}

    def record(problem_name: str, result: IdentityResult, duration_ms: float) -> None:
        durations[result.name].append(duration_ms)
        statuses[result.name] = result.status

    for _ in range(rounds):
        problem = Problem.from_text(path.read_text())
        Verifier(on_identity=record).run(problem, problem_name=path.name)

    print(f"\n{path.name}")
    print("-" * 60)
    for name, values in durations.items():
        print(
            f"  {name:<26} {statuses[name]:<8} "
            f"P50 {percentile(values, 0.50):9.2f} ms  P90 {percentile(values, 0.90):9.2f} ms"
        )
    return durations


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("files", nargs="*", type=Path, help="problem files (default: problems/*.nfw)")
    parser.add_argument("--rounds", type=int, default=3)
    args = parser.parse_args()

    files = args.files or sorted(PROBLEMS.glob("*.nfw"))
    start = time.perf_counter()
    for path in files:
        measure(path, args.rounds)
    print(f"\ntotal {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()

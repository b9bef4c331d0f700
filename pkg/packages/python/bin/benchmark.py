#!/usr/bin/env python3
"""Time phi matrix assembly and double-coset scans.

Runs each scenario a few times and prints the timings as JSON, optionally into a file.
"""

import argparse
import json
import sys
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from pgl2_whittaker import LevelParams
from pgl2_whittaker.model import kernel_matrix, phi_matrix
from pgl2_whittaker.options import ScanBounds
from pgl2_whittaker.orbits import double_coset_scan


@dataclass
class TimingMetrics:
    scenario: str
    p: int
    k: int
    size: int
    best_ms: float
    mean_ms: float
    iterations: int


def time_scenario(scenario: str, p: int, k: int, iterations: int, run: Callable[[], int]) -> TimingMetrics:
    timings = []
    size = 0
    for _ in range(iterations):
        started = time.perf_counter()
        size = run()
        timings.append((time.perf_counter() - started) * 1000)
    return TimingMetrics(scenario, p, k, size, min(timings), sum(timings) / len(timings), iterations)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    parser.add_argument("--k", type=int, nargs="+", default=[1, 2])
    parser.add_argument("--iterations", type=int, default=3)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--scan-depth", type=int, default=1)
    parser.add_argument("--output", type=Path, default=None)
    args = parser.parse_args()

    results: list[TimingMetrics] = []
    for p in args.primes:
        for k in args.k:
            level = LevelParams(p=p, k=k, n=0)

            def assemble(level: LevelParams = level) -> int:
                return len(phi_matrix(level, workers=args.workers).rows)

            def closed_form(level: LevelParams = level) -> int:
                return len(kernel_matrix(level).rows)

            results.append(time_scenario("phi_matrix", p, k, args.iterations, assemble))
            results.append(time_scenario("kernel_matrix", p, k, args.iterations, closed_form))

        bounds = ScanBounds(p=p, n_min=-1, n_max=1, depth=args.scan_depth)

        def scan(bounds: ScanBounds = bounds) -> int:
            return len(double_coset_scan(bounds, workers=args.workers).results)

        results.append(time_scenario("double_coset_scan", p, 0, args.iterations, scan))
        print(f"p={p} done", file=sys.stderr)

    payload = json.dumps([asdict(result) for result in results], indent=2)
    if args.output is not None:
        args.output.write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)


if __name__ == "__main__":
    main()

"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel with both timings and the speed-up.  Rows for the
compiled backend are skipped when the extension was not built.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from dnastore.kernels import compiled_backend, python_backend


def workloads(rng: random.Random):
    def seq(n):
        return bytes(rng.choice(b"ACGT") for _ in range(n))

    x = seq(20)
    accepted = [seq(20) for _ in range(100)]
    body = seq(80)
    return {
        "hamming": lambda k: k.hamming(x, accepted[0]),
        "correlated": lambda k: k.correlated(x, accepted[1], 1, 0),
        "rds_max": lambda k: k.rds_max(x, 4),
        "gc_count": lambda k: k.gc_count(body),
        "compatible(100)": lambda k: k.compatible(x, accepted, 10, 1),
        "stem_free": lambda k: k.stem_free(x, 6),
        "lcp": lambda k: k.lcp(body, 3, x),
        "count_avoiders(N=7)": lambda k: k.count_avoiders([b"AG", b"TC"], 7),
    }


def bench(fn, backend, repeat: int) -> float:
    number = max(1, repeat)
    return min(timeit.repeat(lambda: fn(backend), number=number, repeat=3)) / number


_SEARCH = (
    "import time; from dnastore.address import greedy_search; t = time.perf_counter(); "
    "greedy_search(1000, seed=1, budget={budget}); print(time.perf_counter() - t)"
)


def search_time(pure: bool, budget: int) -> float:
    """Wall time of a fixed-budget address search in a fresh interpreter."""
    env = dict(os.environ, DNASTORE_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run(
        [sys.executable, "-c", _SEARCH.format(budget=budget)],
        env=env, check=True, capture_output=True, text=True,
    )
    return float(out.stdout)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--search-budget", type=int, default=50000, help="0 skips the search row")
    args = ap.parse_args(argv)
    compiled = compiled_backend()
    rows = []
    for name, fn in workloads(random.Random(0)).items():
        reps = args.repeat if not name.startswith("count") else max(1, args.repeat // 1000)
        py = bench(fn, python_backend, reps)
        cy = bench(fn, compiled, reps) if compiled else None
        if compiled:
            assert fn(python_backend) == fn(compiled), name
        rows.append((name, py, cy))
    print(f"{'kernel':<22}{'python (us)':>14}{'cython (us)':>14}{'speed-up':>10}")
    for name, py, cy in rows:
        cys = f"{cy * 1e6:14.2f}" if cy is not None else f"{'n/a':>14}"
        ratio = f"{py / cy:9.1f}x" if cy else f"{'':>10}"
        print(f"{name:<22}{py * 1e6:14.2f}{cys}{ratio}")
    if args.search_budget:
        py = search_time(True, args.search_budget)
        cy = search_time(False, args.search_budget) if compiled else None
        cys = f"{cy:14.2f}" if cy is not None else f"{'n/a':>14}"
        ratio = f"{py / cy:9.1f}x" if cy else ""
        print(f"\n{'greedy_search (s)':<22}{py:14.2f}{cys}{ratio}")


if __name__ == "__main__":
    main()

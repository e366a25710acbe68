"""Measure normalize+tokenize speed and how preprocessing scales with worker count.

    python3 scripts/bench_throughput.py --lines 200000 --jobs 1 2 4 8
"""

import argparse
import os
import time

from indic_mnmt import normalize
from indic_mnmt.pipeline import preprocess_lines
from indic_mnmt.toy import bench_lines


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lines", type=int, default=100_000)
    ap.add_argument("--lang", default="HI")
    ap.add_argument("--jobs", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    lines = bench_lines(args.lines, args.lang, seed=args.seed)
    rules = normalize.rules_for(args.lang)
    normalize._CHUNK_CACHE.clear()
    t0 = time.perf_counter()
    for line in lines:
        normalize.normalize_line(normalize.tokenize(line, args.lang), rules)
    dt = time.perf_counter() - t0
    print(f"cpus={os.cpu_count()}")
    print(f"normalize+tokenize: {len(lines) / dt:,.0f} lines/s")

    base = None
    for jobs in args.jobs:
        normalize._CHUNK_CACHE.clear()
        t0 = time.perf_counter()
        preprocess_lines(lines, args.lang, False, jobs=jobs)
        dt = time.perf_counter() - t0
        base = base or dt
        print(f"jobs={jobs}: {len(lines) / dt:,.0f} lines/s, speedup {base / dt:.2f}x")


if __name__ == "__main__":
    main()

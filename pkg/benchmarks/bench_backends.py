#!/usr/bin/env python3
"""Benchmark the enumeration kernels: numba backend vs pure-numpy fallback.

Runs the full orbit partition of each ring with both backends (numba is
warmed once so compile time is reported separately) and prints a table.

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --rings "Z/3^3,GF(7),Z/5^2" --threads 4
"""

import argparse
import time

from orbit_atlas import atlas_text, partition_all, ring_from_string
from orbit_atlas._backend import available_backends

DEFAULT_RINGS = "GF(7),GF(9),Z/3^3,Z/5^2"


def time_partition(ring, backend, threads):
    t0 = time.perf_counter()
    part = partition_all(ring, backend=backend, threads=threads)
    return time.perf_counter() - t0, part


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rings", default=DEFAULT_RINGS, help="comma-separated ring specs")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}   threads: {args.threads}")
    if "numba" in backends:
        t0 = time.perf_counter()
        partition_all(ring_from_string("GF(3)"), backend="numba")
        print(f"numba warmup (JIT compile): {time.perf_counter() - t0:.2f}s")
    print()
    header = f"{'ring':<14} {'states':>10} {'orbits':>7} " + " ".join(f"{b:>10}" for b in backends)
    print(header)
    print("-" * len(header))
    for spec in args.rings.split(","):
        spec = spec.strip()
        ring = ring_from_string(spec)
        times = {}
        texts = {}
        for backend in backends:
            elapsed, part = time_partition(ring, backend, args.threads)
            times[backend] = elapsed
            texts[backend] = atlas_text(part)
        assert len(set(texts.values())) == 1, f"{spec}: backends disagree"
        row = f"{spec:<14} {ring.size ** 4:>10} {len(part.reps):>7} "
        row += " ".join(f"{times[b]:>9.3f}s" for b in backends)
        if len(backends) == 2:
            row += f"   (x{times['numpy'] / max(times['numba'], 1e-9):.1f})"
        print(row)


if __name__ == "__main__":
    main()

"""Time the pure-Python and compiled quadrature kernels on the same workload.

    python benchmarks/bench_kernels.py [--pairs 200] [--repeat 3]
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from radmax import profiles
from radmax.quadrature import QuadratureSpec, use_backend
from radmax.spherical import normalization_constant


def workload(n_pairs: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    f = profiles.power(-1.5, (0.5, 3.0)) + profiles.constant(2.0, (4.0, 6.0))
    pairs = [(math.exp(a), math.exp(b)) for a, b in rng.uniform(-1.5, 2.0, (n_pairs, 2))]
    return f, pairs


def run(backend: str, f, pairs, d: int, quad: QuadratureSpec) -> tuple[float, list[float]]:
    k = use_backend(backend)
    xg, wg = quad.rule
    arrs = f.arrays()
    cd = normalization_constant(d)
    t0 = time.perf_counter()
    vals = []
    for r, t in pairs:
        v, *_ = k.spherical_mean_raw(r, t, d, cd, *arrs, xg, wg, quad.tol, quad.max_depth)
        vals.append(v)
    for r, t in pairs:
        k.singular_integral_raw(r, r, r + t, 1, 0.0, *arrs, xg, wg, quad.tol, quad.max_depth)
    return time.perf_counter() - t0, vals


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    f, pairs = workload(args.pairs)
    quad = QuadratureSpec()
    for d in (2, 3, 4):
        times, results = {}, {}
        for backend in ("python", "cython"):
            try:
                best = min(run(backend, f, pairs, d, quad)[0] for _ in range(args.repeat))
            except ImportError:
                print(f"d={d} {backend}: not built")
                continue
            times[backend] = best
            results[backend] = run(backend, f, pairs, d, quad)[1]
        line = ", ".join(f"{b} {t * 1e3:.1f} ms" for b, t in times.items())
        if len(times) == 2:
            diff = max(abs(a - b) for a, b in zip(results["python"], results["cython"]))
            line += f", speedup {times['python'] / times['cython']:.1f}x, max |diff| {diff:.2e}"
        print(f"d={d}: {line}")


if __name__ == "__main__":
    main()

"""Throughput comparison of the compiled rate kernel vs the numpy fallback.

Run: python benchmarks/bench_kernel.py
"""

import time

import numpy as np

import relayrates as rr
from relayrates.coding import row_lengths
from relayrates.kernel import BACKEND, batch_min_rate, batch_min_rate_py
from relayrates.optimizer import free_to_fractions

CASES = [(5, 2), (5, 4), (8, 3), (12, 4)]
BATCH = 200_000
REPEAT = 3


def main():
    print(f"compiled backend available: {BACKEND == 'cython'}")
    rng = np.random.default_rng(0)
    for t_count, k in CASES:
        geom = rr.build_linear_geometry([1.0] * (t_count - 1))
        power = rr.PowerConfig.uniform(t_count, 10.0)
        perm = rr.Permutation.identity(t_count)
        problem = rr.compile_chain(
            geom, rr.PropagationModel(), power, k, perm, rr.CombiningMode.COHERENT
        )
        lengths = tuple(row_lengths(t_count, k, perm)[t] for t in range(1, t_count))
        free = rng.random((BATCH, sum(m - 1 for m in lengths)))
        cands = free_to_fractions(free, lengths)

        results = {}
        for name, fn in (("cython", batch_min_rate), ("python", batch_min_rate_py)):
            if name == "cython" and BACKEND != "cython":
                continue
            best = float("inf")
            for _ in range(REPEAT):
                start = time.perf_counter()
                out = fn(problem, cands)
                best = min(best, time.perf_counter() - start)
            results[name] = (best, out)

        line = f"T={t_count} k={k}: "
        for name, (secs, _) in results.items():
            line += f"{name} {BATCH / secs / 1e6:6.2f} Meval/s  "
        if len(results) == 2:
            agree = np.max(np.abs(results["cython"][1] - results["python"][1]))
            speedup = results["python"][0] / results["cython"][0]
            line += f"speedup {speedup:4.1f}x  max|diff| {agree:.2e}"
        print(line)


if __name__ == "__main__":
    main()

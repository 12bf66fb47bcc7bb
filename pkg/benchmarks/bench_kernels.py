"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from psr._backend import available_backends

CASES = [
    ("uniform, f=12, 1e6 samples", "uniform", 12, 1_000_000),
    ("uniform, f=100, 2e5 samples", "uniform", 100, 200_000),
    ("product, f=12, 2e5 samples", "product", 12, 200_000),
    ("enumerate, f=20", "enumerate", 20, None),
]


def run_case(k, kind, f, n, rng):
    w = rng.integers(-8, 9, size=f).astype(np.int64)
    need = int(w[w > 0].sum() // 2)
    if kind == "uniform":
        return lambda: k.count_uniform(w, need, 1, 12345, n)
    if kind == "product":
        cut = rng.integers(0, 1 << 53, size=f, dtype=np.uint64)
        return lambda: k.count_product(w, need, 1, cut, 12345, n)
    return lambda: k.count_enumerate(w, need, 1)


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    names = sorted(backends)
    print(f"{'case':<32}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, kind, f, n in CASES:
        times, results = [], []
        for name in names:
            fn = run_case(backends[name], kind, f, n, np.random.default_rng(f))
            t, r = best_of(fn, args.repeat)
            times.append(t)
            results.append(r)
        assert len(set(results)) == 1, f"backends disagree on {label}: {results}"
        line = f"{label:<32}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if len(names) > 1:
            line += f"{times[names.index('numpy')] / times[names.index('cython')]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()

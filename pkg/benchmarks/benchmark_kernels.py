"""Benchmark the compiled kernels against the numpy fallback.

Run from the repository root:

    python benchmarks/benchmark_kernels.py

The same comparisons drive real workloads: growing a million-letter word,
counting its windows, and evaluating exponential sums over a k-grid.
"""
import time

import numpy as np

from noblemeans._kernels import pyfallback

try:
    from noblemeans._kernels import _native
except ImportError:
    _native = None


def grow_word(impl, m, target, rng):
    codes = np.array([0], dtype=np.uint8)
    while codes.size < target:
        n_a = int((codes == 0).sum())
        choices = rng.integers(0, m + 1, size=n_a).astype(np.uint8)
        codes = impl.substitute(codes, m, choices)
    return codes


def bench(label, fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return label, min(times)


def main():
    rng = np.random.default_rng(7)
    word = grow_word(pyfallback, 1, 1_000_000, np.random.default_rng(0))
    positions = np.cumsum(np.where(word == 0, (1 + 5**0.5) / 2, 1.0))[:20_000]
    ks = np.linspace(0.0, 3.0, 2_000)

    cases = [
        ("substitute to 1e6 letters", lambda impl: grow_word(impl, 1, 1_000_000, np.random.default_rng(1))),
        ("window_counts ell=4 on 1e6", lambda impl: impl.window_counts(word, 4)),
        ("phase_sums 2e3 k x 2e4 pts", lambda impl: impl.phase_sums(positions, ks)),
    ]

    rows = []
    for name, runner in cases:
        label, fallback_time = bench(name, lambda: runner(pyfallback))
        if _native is not None:
            _, native_time = bench(name, lambda: runner(_native))
            rows.append((label, fallback_time, native_time, fallback_time / native_time))
        else:
            rows.append((label, fallback_time, None, None))

    print(f"{'case':<30} {'fallback':>10} {'native':>10} {'speedup':>8}")
    for label, fb, nat, speedup in rows:
        if nat is None:
            print(f"{label:<30} {fb * 1e3:>8.1f}ms {'-':>10} {'-':>8}")
        else:
            print(f"{label:<30} {fb * 1e3:>8.1f}ms {nat * 1e3:>8.1f}ms {speedup:>7.2f}x")
    if _native is None:
        print("compiled extension not available; set it up with `pip install -e .`")


if __name__ == "__main__":
    main()

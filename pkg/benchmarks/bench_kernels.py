"""Benchmark the compiled wave kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from wavembed.kernels import available_backends, get_backend

SIZES = [(320, 16), (2048, 64), (8192, 128)]


def _case(n, d, seed=0):
    rng = np.random.default_rng(seed)
    amp = rng.uniform(-1.0, 1.0, (n, d))
    freq = rng.uniform(-0.5, 0.5, (n, d))
    phase = rng.uniform(0.0, 6.28, (n, d))
    pos = np.arange(1.0, n + 1.0)
    g = rng.normal(size=(n, d))
    return amp, freq, phase, pos, g


def _best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench(repeats):
    names = available_backends()
    rows = []
    for n, d in SIZES:
        amp, freq, phase, pos, g = _case(n, d)
        for op, make in (
            ("wave_planes", lambda m: lambda: m.wave_planes(amp, freq, phase, pos)),
            ("wave_planes_grad",
             lambda m: lambda: m.wave_planes_grad(amp, freq, phase, pos, g, g)),
            ("modulus", lambda m: lambda: m.modulus(amp, freq)),
            ("modulus_grad",
             lambda m: lambda: m.modulus_grad(amp, freq, np.hypot(amp, freq), g)),
        ):
            times = {}
            for name in names:
                backend = get_backend(name)
                fn = make(backend)
                fn()  # warm up
                times[name] = _best_of(fn, repeats)
            rows.append(((n, d), op, times))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="best-of-N timing")
    args = parser.parse_args()

    rows = bench(args.repeats)
    names = available_backends()
    print(f"backends: {', '.join(names)}  (best of {args.repeats})")
    header = f"{'size':>12}  {'op':<18}" + "".join(f"{n:>12}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for (n, d), op, times in rows:
        line = f"{f'{n}x{d}':>12}  {op:<18}"
        for name in names:
            line += f"{times[name] * 1e6:>10.1f}us"
        if len(names) > 1:
            line += f"{times['numpy'] / times['native']:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()

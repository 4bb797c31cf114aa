#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the raw 1D row-batch kernels and the full 2D transforms on a
512x512 image, printing per-op milliseconds and the speedup.

    python3 benchmarks/bench_kernels.py [--size 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from rectwave import _backend, filterbank, transform2d


def _best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def bench(size, repeats):
    if "cython" not in _backend.available_backends():
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    rng = np.random.default_rng(0)
    img = rng.uniform(0.0, 255.0, size=(size, size))
    fb = filterbank.builtin("crf137")
    kernel_args = (img, fb.h_dual.coef, fb.h_dual.start, fb.g_dual.coef,
                   fb.g_dual.start, False)

    ops = {
        "analysis_rows (1 step)":
            lambda: _backend.kernels.analysis_rows(*kernel_args),
        "rect forward+inverse":
            lambda: transform2d.rect_inverse(
                transform2d.rect_forward(img, fb, 6, 6), fb),
        "square forward+inverse":
            lambda: transform2d.square_inverse(
                transform2d.square_forward(img, fb, 6), fb),
    }

    print(f"{size}x{size} image, crf137, best of {repeats} runs")
    print(f"{'op':30s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    active = _backend.get_backend()
    try:
        for name, fn in ops.items():
            times = {}
            for backend in ("python", "cython"):
                _backend.set_backend(backend)
                fn()  # warm up
                times[backend] = _best_of(fn, repeats)
            print(f"{name:30s} {times['python']:10.2f} {times['cython']:10.2f} "
                  f"{times['python'] / times['cython']:7.1f}x")
    finally:
        _backend.set_backend(active)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    bench(args.size, args.repeats)

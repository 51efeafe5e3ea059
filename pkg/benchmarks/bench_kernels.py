#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each generation kernel at a few sizes on both backends, checks the
outputs are identical, and prints a timing table.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bigen import _pykernels
from bigen.rng import derive_seed

try:
    from bigen import _ckernels
except ImportError:
    _ckernels = None


def time_call(fn, *args, repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


CASES = [
    ("pgg  t=1    n=10k", "pgg_kernel", lambda: (derive_seed(1), 1, 10_000, 26, None)),
    ("pgg  t=50   n=100k", "pgg_kernel", lambda: (derive_seed(2), 50, 100_000, 26, None)),
    ("mppl m=10k  L=5k", "mppl_kernel", lambda: (derive_seed(3), 10_000, 5_000, 0.4)),
    (
        "mdc  N=1k  ar<=40",
        "mdc_kernel",
        lambda: (
            derive_seed(4),
            np.arange(1000, dtype=np.int64) % 40 + 1,
            True,
        ),
    ),
    (
        "mdc  N=10k ar<=40",
        "mdc_kernel",
        lambda: (
            derive_seed(5),
            np.arange(10_000, dtype=np.int64) % 40 + 1,
            False,
        ),
    ),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels unavailable; timing the pure backend only")

    header = f"{'case':<20} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, name, make_args in CASES:
        call_args = make_args()
        py_time, py_out = time_call(getattr(_pykernels, name), *call_args,
                                    repeat=args.repeat)
        if _ckernels is None:
            print(f"{label:<20} {py_time * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
            continue
        c_time, c_out = time_call(getattr(_ckernels, name), *call_args,
                                  repeat=args.repeat)
        for a, b in zip(py_out, c_out):
            if not np.array_equal(a, b):
                raise SystemExit(f"backend outputs differ for {label}")
        print(
            f"{label:<20} {py_time * 1e3:>10.2f}ms {c_time * 1e3:>10.2f}ms "
            f"{py_time / c_time:>8.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Time each detector on the numba kernels and on the pure-numpy fallback.

    python benchmarks/compare_backends.py --loops 100

Prints one line per (detector, backend) and a speed-up column. Both backends
are checked for identical output on the benchmark frame before timing.
"""

from __future__ import annotations

import argparse

import numpy as np

from chessdet._backend import HAS_NUMBA
from chessdet.sweep import bench_callable, bench_frame, benchmark

DETECTORS = ("chess", "chess_blur5", "harris", "harris_noblur", "ptam", "ptam_noblur")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--loops", type=int, default=100)
    ap.add_argument("--detectors", nargs="+", default=list(DETECTORS), choices=DETECTORS)
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1

    frame = bench_frame()
    print(f"frame {frame.shape[1]}x{frame.shape[0]}, {args.loops} loops")
    print(f"{'detector':<14}{'numba ms':>10}{'numpy ms':>10}{'speed-up':>10}")
    for name in args.detectors:
        a = bench_callable(name, "numba")(frame)
        b = bench_callable(name, "numpy")(frame)
        if not np.array_equal(a, b):
            print(f"{name}: backends disagree")
            return 1
        t_nb = benchmark(name, frame, args.loops, backend="numba")
        t_np = benchmark(name, frame, args.loops, backend="numpy")
        ms_nb = 1e3 * t_nb.total_s / args.loops
        ms_np = 1e3 * t_np.total_s / args.loops
        print(f"{name:<14}{ms_nb:>10.2f}{ms_np:>10.2f}{ms_np / ms_nb:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

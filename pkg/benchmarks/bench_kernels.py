"""Compare the compiled orbit kernel against the pure-Python twin.

Usage: python benchmarks/bench_kernels.py

The kernel is the serial hot loop under every long-horizon operation (orbit
windows, visit cocycles, record-series scans).  The figures below measure the
raw kernel on the golden rotation and one end-to-end record series.
"""

import time
from fractions import Fraction

import numpy as np

import ietlib
from ietlib import IET, Scalar, parse_scalar, psi_records
from ietlib import _orbit_py
from ietlib._fast import safety_bound


def bench(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    golden = IET([parse_scalar("-1/2+1/2*sqrt(5)"), parse_scalar("3/2-1/2*sqrt(5)")], [2, 1])
    view = golden._kernel_view
    x = Scalar(Fraction(1, 2))
    u0, v0 = int(x.a * view.q), int(x.b * view.q)
    bound = safety_bound(view.d)
    args_py = (u0, v0, view.bu, view.bv, view.wu, view.wv, view.d)
    args_c = (
        np.int64(u0), np.int64(v0),
        np.asarray(view.bu, dtype=np.int64), np.asarray(view.bv, dtype=np.int64),
        np.asarray(view.wu, dtype=np.int64), np.asarray(view.wv, dtype=np.int64),
        np.int64(view.d),
    )

    print(f"compiled extension available: {ietlib.HAVE_COMPILED}")
    print(f"active kernel: {ietlib.kernel_name()}")
    print()
    print(f"{'steps':>10} {'pure (s)':>12} {'compiled (s)':>14} {'speedup':>9}")
    for steps in (10**4, 10**5, 10**6):
        t_py = bench(_orbit_py.orbit_path, *args_py, steps, bound)
        row = f"{steps:>10} {t_py:>12.4f}"
        if ietlib.HAVE_COMPILED:
            from ietlib import _orbitcore

            t_c = bench(_orbitcore.orbit_path, *args_c, np.int64(steps), np.int64(bound))
            row += f" {t_c:>14.4f} {t_py / t_c:>8.1f}x"
        print(row)

    print()
    t0 = time.perf_counter()
    series = psi_records(golden, Scalar(Fraction(1, 2)), 10**4)
    dt = time.perf_counter() - t0
    print(f"end-to-end record series (N=1e4, {ietlib.kernel_name()} kernel): {dt:.3f}s, "
          f"psi_hat={series.psi_hat:.6f}")
    print("rerun with IETLIB_PURE=1 to time the end-to-end pure path")


if __name__ == "__main__":
    main()

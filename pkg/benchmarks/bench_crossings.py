"""Benchmark the segment-pair crossing kernel: compiled core vs numpy twin.

The boundary certifier spends most of its time in find_crossings, so this is
the number that decides whether the extension is worth building on a host.
Curves mimic the real workload: smooth image curves of sheared maps plus a
noisy circle whose many near-contacts stress the bounding-box prefilter.

Usage: python3 benchmarks/bench_crossings.py [--sizes 512,2048,8192] [--repeats 5]
"""

import argparse
import time

import numpy as np

from harmlens import _crossings_py
from harmlens.geometry import HAVE_COMPILED_CORE

if HAVE_COMPILED_CORE:
    from harmlens import _crossings
else:
    _crossings = None


def _curves(n: int, rng):
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    smooth = np.exp(1j * th) * (1.0 + 0.3 * np.cos(3.0 * th))
    noisy = np.exp(1j * th) * (1.0 + 0.02 * rng.standard_normal(n))
    return {"smooth": smooth, "noisy": noisy}


def _time(fn, x, y, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(x, y, True, 0.0)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="512,2048,8192")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    print(f"compiled core available: {HAVE_COMPILED_CORE}")
    print(f"{'curve':>8} {'n':>6} {'numpy (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for n in sizes:
        for name, z in _curves(n, rng).items():
            x = np.ascontiguousarray(z.real)
            y = np.ascontiguousarray(z.imag)
            t_py = _time(_crossings_py.find_crossings, x, y, args.repeats)
            if _crossings is None:
                print(f"{name:>8} {n:>6} {t_py * 1e3:>12.3f} {'n/a':>14} {'n/a':>8}")
                continue
            t_c = _time(_crossings.find_crossings, x, y, args.repeats)
            a = _crossings_py.find_crossings(x, y, True, 0.0)
            b = _crossings.find_crossings(x, y, True, 0.0)
            tag = "" if a == b else "  MISMATCH"
            print(
                f"{name:>8} {n:>6} {t_py * 1e3:>12.3f} {t_c * 1e3:>14.3f} "
                f"{t_py / t_c:>8.1f}{tag}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

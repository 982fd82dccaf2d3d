#!/usr/bin/env python3
"""Benchmark the numba and numpy kernel backends against each other.

The three angular kernels are the innermost loops of every potential,
bad-term, and kernel-recursion evaluation: each call reduces a batch of
radii against ~144 quadrature nodes.  Run:

    python benchmarks/bench_kernels.py [--batch 256] [--repeat 200]

The same workloads are also cross-checked for agreement before timing.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from qcurv.kernels import _numpy_impl

try:
    from qcurv.kernels import _numba_impl
except ImportError:
    _numba_impl = None

_LEG_A, _LEG_B = 80, 64


def _nodes():
    ga = np.polynomial.legendre.leggauss(_LEG_A)
    gb = np.polynomial.legendre.leggauss(_LEG_B)
    return ga[0], ga[1], gb[0], gb[1]


def _workloads(batch: int):
    rng = np.random.default_rng(20240817)
    s = rng.uniform(0.05, 20.0, batch)
    ga_x, ga_w, gb_x, gb_w = _nodes()
    inv_i0 = 1.0 / (math.sqrt(math.pi) * math.gamma(1.5) / math.gamma(2.0))
    return [
        ("log_kernel_mean", lambda m: m.log_kernel_mean(3.0, s, 4, ga_x, ga_w, gb_x, gb_w, inv_i0)),
        ("riesz_kernel_mean", lambda m: m.riesz_kernel_mean(3.0, s, 1, 4, ga_x, ga_w, gb_x, gb_w, inv_i0)),
        ("ball_log_mass", lambda m: m.ball_log_mass(3.0, s, 4, ga_x, ga_w, gb_x, gb_w)),
    ]


def _time(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batch", type=int, default=256, help="radii per kernel call")
    ap.add_argument("--repeat", type=int, default=200, help="timing repetitions (best-of)")
    args = ap.parse_args()

    works = _workloads(args.batch)
    if _numba_impl is not None:
        for name, call in works:
            a = call(_numpy_impl)
            b = call(_numba_impl)  # first call also JIT-compiles
            worst = float(np.max(np.abs(a - b)))
            print(f"agreement {name}: max |numpy - numba| = {worst:.3e}")
        print()

    header = f"{'kernel':20s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, call in works:
        t_np = _time(lambda: call(_numpy_impl), args.repeat)
        if _numba_impl is None:
            print(f"{name:20s} {t_np * 1e6:10.1f}us {'n/a':>12s} {'n/a':>9s}")
            continue
        t_nb = _time(lambda: call(_numba_impl), args.repeat)
        print(f"{name:20s} {t_np * 1e6:10.1f}us {t_nb * 1e6:10.1f}us {t_np / t_nb:8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Timing comparison: compiled extension vs NumPy fallback.

Run as ``python benchmarks/bench_backends.py [--repeat 5]``.  Exercises the
two backend entry points on representative workloads and prints the best
wall time of each, plus the speedup.  The compiled rows are skipped when
the extension is not built.
"""

import argparse
import time

import numpy as np

from helgason import _backend, _fallback


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    ap.add_argument("--n-pts", type=int, default=200_000, help="evaluation points")
    ap.add_argument("--n-zeta", type=int, default=64, help="wavepacket batch size")
    args = ap.parse_args()

    rng = np.random.default_rng(20260815)
    pts = rng.uniform(-1.5, 1.5, size=(args.n_pts, 2))
    params = np.array([0.0, 0.0, 1.0, 1.0])
    weights = rng.uniform(0.0, 1e-4, size=args.n_pts)
    fvals = rng.normal(size=args.n_pts)
    res = rng.uniform(-0.5, 0.5, size=(args.n_zeta, 2))
    ims = rng.uniform(-1.0, 1.0, size=(args.n_zeta, 2))

    impls = [("python", _fallback)]
    if _backend.BACKEND_NAME == "compiled":
        impls.append(("compiled", _backend._compiled))
    else:
        print("note: compiled extension not built, timing the fallback only")

    workloads = [
        ("eval_phantom (bump, %dk pts)" % (args.n_pts // 1000),
         lambda impl: impl.eval_phantom(1, params, pts)),
        ("sb_accumulate_batch (%d zetas)" % args.n_zeta,
         lambda impl: impl.sb_accumulate_batch(pts, weights, fvals, res, ims, 0.3)),
    ]

    print(f"{'workload':<38} {'backend':<10} {'best (ms)':>10}")
    speedups = {}
    for label, call in workloads:
        for name, impl in impls:
            t = best_time(lambda: call(impl), args.repeat)
            speedups.setdefault(label, {})[name] = t
            print(f"{label:<38} {name:<10} {1e3 * t:>10.2f}")
        row = speedups[label]
        if "compiled" in row:
            print(f"{'':<38} {'speedup':<10} {row['python'] / row['compiled']:>9.1f}x")

    # cross-check: identical numbers either way
    if _backend.BACKEND_NAME == "compiled":
        a = np.asarray(_backend._compiled.sb_accumulate_batch(pts, weights, fvals, res, ims, 0.3))
        b = np.asarray(_fallback.sb_accumulate_batch(pts, weights, fvals, res, ims, 0.3))
        err = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
        print(f"\nmax relative backend difference: {err:.2e}")


if __name__ == "__main__":
    main()

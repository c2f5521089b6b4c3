"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the three hot paths: the confocal-parameter solve, one demag-factor
integral, and the potential at a batch of points.  Also reports the largest
disagreement between backends on the batch.
"""

import argparse
import time

import numpy as np

from ellipot import _backend


def _time(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(rng, count):
    a = np.exp(rng.uniform(np.log(0.2), np.log(5.0), (count, 3)))
    x = rng.normal(size=(count, 3)) * a * 1.5
    return a * a, x * x


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=200)
    args = ap.parse_args(argv)

    a2s, x2s = _cases(np.random.default_rng(0), args.points)
    backends = {name: _backend.load(name) for name in _backend.available()}
    values = {}
    print(f"{'operation':<28}" + "".join(f"{n:>14}" for n in backends) + "   speed-up")
    rows = []

    def tau_batch(k):
        for a2, x2 in zip(a2s, x2s):
            if np.sum(x2 / a2) > 1:
                k.solve_tau(a2, x2, 1e-12, 200)

    def demag_one(k):
        a2 = np.array([9.0, 4.0, 1.0])
        for i in range(3):
            k.ellipsoid_tail(a2, np.zeros(3), 0.0, 1, i, 1e-10, 1e-14, 200)

    def potential_batch(k, keep=None):
        out = []
        for a2, x2 in zip(a2s, x2s):
            lower = 0.0
            if np.sum(x2 / a2) > 1:
                lower = k.solve_tau(a2, x2, 1e-12, 200)[0]
            out.append(k.ellipsoid_tail(a2, x2, lower, 0, 0, 1e-10, 1e-14, 200)[0])
        if keep is not None:
            keep.extend(out)

    for label, fn in [("solve_tau x batch", tau_batch),
                      ("demag factors (3 integrals)", demag_one),
                      (f"potential x {args.points}", potential_batch)]:
        times = {n: _time(lambda k=k: fn(k), args.repeat) for n, k in backends.items()}
        rows.append((label, times))
    for name, k in backends.items():
        values[name] = []
        potential_batch(k, values[name])

    for label, times in rows:
        cells = "".join(f"{times[n] * 1e3:>12.3f}ms" for n in backends)
        speed = ""
        if {"cython", "python"} <= set(times):
            speed = f"{times['python'] / times['cython']:>9.1f}x"
        print(f"{label:<28}{cells}{speed}")
    if len(values) == 2:
        a, b = (np.asarray(v) for v in values.values())
        print(f"max relative disagreement on potentials: {np.max(np.abs(a - b) / np.abs(b)):.2e}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Two layers are timed:

* raw kernel calls (scalar value, fused value+Ricci) on a small flag space
  and on a denser six-summand model, both backends in-process;
* a full certified solve per backend, each in a subprocess so the
  import-time backend selection is exercised exactly as in production
  (HOMRICCI_PURE_PYTHON=1 forces the fallback).

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "tests"))

from homricci import _kernels, flag3
from homricci.curvature import tables_for
from helpers import random_space_model

SOLVE_SNIPPET = """
import time
import homricci as hr
m = hr.flag3(4, 2, 4)
T = hr.DiagonalForm.full((1.0, 1.0, 1.0))
hr.solve_prescribed_ricci(m, T)  # warm caches
t0 = time.perf_counter()
for _ in range(10):
    rep = hr.solve_prescribed_ricci(m, T)
assert rep.status == "solved"
print((time.perf_counter() - t0) / 10 * 1e3, hr.kernel_backend)
"""


def time_kernel(fn, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats * 1e6  # microseconds


def bench_raw(repeats):
    rng = np.random.default_rng(0)
    cases = {
        "flag3(4,2,4)": flag3(4, 2, 4),
        "random s=6": random_space_model(rng, s=6, ensure_proper_subalgebra=False),
    }
    backends = {"python": _kernels.get_backend("python")}
    try:
        backends["compiled"] = _kernels.get_backend("compiled")
    except ImportError:
        print("compiled extension not built; raw comparison limited to python")

    print(f"{'case':<16} {'kernel':<16} " + " ".join(f"{b:>12}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for label, model in cases.items():
        full = tuple(range(1, model.s + 1))
        tab = tables_for(model, full)
        x = np.abs(rng.normal(1.5, 0.3, model.s)) + 0.2
        out = np.empty(model.s)
        sa, sb = np.empty(model.s), np.empty(model.s)
        for kernel_name in ("scalar_value", "value_and_ricci"):
            row = []
            for backend in backends.values():
                if kernel_name == "scalar_value":
                    fn = lambda: backend.scalar_value(
                        tab.db, tab.ti, tab.tj, tab.tk, tab.tv, x
                    )
                else:
                    fn = lambda: backend.value_and_ricci(
                        tab.db, tab.b, tab.d, tab.ti, tab.tj, tab.tk, tab.tv,
                        x, out, sa, sb,
                    )
                row.append(time_kernel(fn, repeats))
            line = f"{label:<16} {kernel_name:<16} " + " ".join(
                f"{v:>10.2f}us" for v in row
            )
            if len(row) == 2:
                line += f"   {row[0] / row[1]:.1f}x"
            print(line)


def bench_solve():
    print()
    print("full solve, 10 runs averaged, flag3(4,2,4) with unit target:")
    for label, env_value in (("compiled", "0"), ("python", "1")):
        env = dict(os.environ, HOMRICCI_PURE_PYTHON=env_value)
        proc = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(f"  {label}: failed\n{proc.stderr}")
            continue
        ms, backend = proc.stdout.split()
        print(f"  {label:<9} ({backend} backend): {float(ms):7.2f} ms/solve")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20000)
    args = parser.parse_args()
    bench_raw(args.repeats)
    bench_solve()


if __name__ == "__main__":
    main()

"""Compiled vs pure-numpy kernels: Jacobi sweeps and P1 stiffness assembly.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from wentzel_lab import _backend
from wentzel_lab.closed_form import Disk
from wentzel_lab.fem.mesh import gen_polar_mesh


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_jacobi(kern, n, repeat):
    rng = np.random.default_rng(n)
    a0 = rng.standard_normal((n, n))
    a0 = a0 + a0.T

    def run():
        a = a0.copy()
        kern.jacobi_sweeps(a, np.eye(n), 1e-15, 60)

    return best_of(run, repeat)


def bench_assembly(kern, level, repeat):
    m = gen_polar_mesh(Disk(1.0), 8 * 2**level, 32 * 2**level)
    return best_of(lambda: kern.p1_stiffness(m.vertices, m.triangles), repeat)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    names = ["pure"] + (["compiled"] if _backend.HAVE_EXTENSION else [])
    print(f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    cases = [(f"jacobi n={n}", lambda k, n=n: bench_jacobi(k, n, args.repeat)) for n in (32, 64, 128)]
    cases += [(f"p1 assembly level {L}", lambda k, L=L: bench_assembly(k, L, args.repeat)) for L in (1, 2, 3)]
    for label, fn in cases:
        t = [fn(_backend.get(n)) for n in names]
        speed = f"{t[0] / t[-1]:>9.1f}x" if len(t) == 2 else ""
        print(f"{label:<24}" + "".join(f"{x * 1e3:>10.2f}ms" for x in t) + speed)


if __name__ == "__main__":
    main()

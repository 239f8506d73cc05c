"""Wall-clock comparison of the numba and numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel is called once before timing so numba compilation is excluded.
"""
import argparse
import time

import numpy as np

from tsde import _kernels
from tsde.simple_model_solver import ModelParams


def best_of(f, repeat):
    f()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        f()
        times.append(time.perf_counter() - t)
    return min(times)


def orbit_case(D, k):
    _, conj = _kernels.perm_tables(k)
    return f"orbits D={D} k={k}", lambda w: _kernels.orbits(conj, D - 1, w)


def sweep_case(N):
    p = ModelParams(1.0, 0.01, N)
    E = p.E()
    G = 1.0 / E
    mom = p.mom.astype(np.float64)
    return f"2pt sweep N={N}", lambda w: _kernels.sweep(G, E, p.lam, p.damping, mom, w)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [orbit_case(4, 4), orbit_case(5, 4), sweep_case(3), sweep_case(8), sweep_case(16)]
    print(f"{'kernel':<20}{'numba [s]':>12}{'numpy [s]':>12}{'ratio':>8}")
    for name, f in cases:
        a = best_of(lambda: f("numba"), args.repeat)
        b = best_of(lambda: f("numpy"), args.repeat)
        print(f"{name:<20}{a:>12.5f}{b:>12.5f}{b / a:>8.1f}")


if __name__ == "__main__":
    main()

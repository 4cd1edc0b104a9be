"""Time one REA step and a full run with the numba and numpy backends.

    python benchmarks/bench_step.py [--limiter berger] [--repeat 50]
"""

import argparse
import time

import numpy as np

from slopelim import _kernels
from slopelim.mesh import make_stretched
from slopelim.solver import SimConfig, run


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--limiter", default="berger")
    parser.add_argument("--repeat", type=int, default=50)
    parser.add_argument("--sizes", default="100,1000,10000,100000")
    args = parser.parse_args()

    backends = [b for b in _kernels.BACKENDS if b != "numba" or _kernels.HAVE_NUMBA]
    print(f"limiter={args.limiter}")
    print(f"{'n_cells':>8} " + " ".join(f"{b + ' step [us]':>16}" for b in backends) + f" {'speedup':>8}")
    for n in map(int, args.sizes.split(",")):
        mesh = make_stretched(n, 0.0, 1.0, 0.5, 2.0, seed=1)
        u = np.random.default_rng(0).normal(size=n)
        w = mesh.widths
        dt = 0.8 * w.min()
        times = {}
        for b in backends:
            _kernels.advect_step(u, w, args.limiter, 1.0, dt, 1e-14, b)  # warm up / compile
            times[b] = best_of(lambda: _kernels.advect_step(u, w, args.limiter, 1.0, dt, 1e-14, b), args.repeat)
        speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{n:>8} " + " ".join(f"{times[b] * 1e6:>16.1f}" for b in backends) + f" {speedup:>8.1f}")

    config = SimConfig(make_stretched(400, 0.0, 1.0, 0.5, 2.0, seed=1), limiter=args.limiter, cfl=0.5)
    print("\nfull run, 400 stretched cells, one period:")
    for b in backends:
        run(SimConfig(config.mesh, limiter=args.limiter, t_end=1e-3), 0, b)
        t0 = time.perf_counter()
        result = run(config, 0, b)
        print(f"  {b:>6}: {time.perf_counter() - t0:.3f} s for {result.n_steps} steps")


if __name__ == "__main__":
    main()

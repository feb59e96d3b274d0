"""Time the compiled and numpy interference kernels on the same workload.

    python benchmarks/bench_kernels.py [--side 4] [--spw 10] [--nodes 8192] [--threads 1]

Workload: one denominator evaluation, i.e. every scatterer of a square plate
against every node of the default quadrature.
"""
import argparse
import time

import numpy as np

from qrcs import _fallback
from qrcs.scene import PlateTarget, Wave, make_grid

try:
    from qrcs import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--side", type=float, default=4.0, help="plate side in wavelengths")
    p.add_argument("--spw", type=int, default=10)
    p.add_argument("--nodes", type=int, default=8192, help="number of wave vectors")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    grid = make_grid(PlateTarget(args.side, args.side), Wave(1.0), args.spw)
    rng = np.random.default_rng(0)
    k = 2 * np.pi
    qx = rng.uniform(-2 * k, 2 * k, args.nodes)
    qy = rng.uniform(-2 * k, 2 * k, args.nodes)
    terms = grid.count * args.nodes
    print(f"{grid.count} scatterers x {args.nodes} wave vectors = {terms:.3g} terms")

    t_py, ref = best_of(lambda: _fallback.interference_batch(grid.x, grid.y, grid.cell_area, qx, qy), args.repeat)
    print(f"numpy    {t_py:8.3f} s  {t_py / terms * 1e9:6.2f} ns/term")
    if _kernels is None:
        print("compiled kernel not available")
        return
    t_c, out = best_of(lambda: _kernels.interference_batch(grid.x, grid.y, grid.cell_area, qx, qy,
                                                           args.threads), args.repeat)
    diff = np.max(np.abs(out - ref)) / np.max(ref)
    print(f"compiled {t_c:8.3f} s  {t_c / terms * 1e9:6.2f} ns/term  ({args.threads} threads)")
    print(f"speedup {t_py / t_c:.1f}x, max relative difference {diff:.1e}")


if __name__ == "__main__":
    main()

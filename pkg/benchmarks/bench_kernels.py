"""Benchmark the compiled kernels against the NumPy fallback.

Times each hot kernel in isolation and one full solver step end to end,
per backend.  Usage::

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --cells 4096 --nx 128 --ny 128 --repeats 50
"""

import argparse
import time

import numpy as np

from graphydro import _backend, solver1d, solver2d
from graphydro.params import PhysParams


def timeit(fn, repeats):
    fn()  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(backend, cells, nx, ny, repeats):
    k = _backend.active()
    rng = np.random.default_rng(99)
    w = rng.standard_normal(cells)
    n2, n3, J2, J3 = (rng.standard_normal(cells) * 0.2 for _ in range(4))
    n0 = rng.uniform(0.5, 1.5, cells)
    J0 = rng.uniform(-0.5, 0.5, cells)
    U = np.ascontiguousarray(rng.standard_normal((12, nx, ny)) * 0.1)
    U[0] = rng.uniform(0.5, 1.5, (nx, ny))

    results = {}
    results["advect_1d"] = timeit(lambda: k.advect_from_left(w, 0.5, 0.0), repeats)
    results["spin_exact"] = timeit(
        lambda: k.spin_step_exact(n2.copy(), n3.copy(), J2.copy(), J3.copy(),
                                  n0, J0, None, 1.0, 2.0, 0.01), repeats)
    results["spin_rk4"] = timeit(
        lambda: k.spin_step_rk4(n2.copy(), n3.copy(), J2.copy(), J3.copy(),
                                n0, J0, None, 1.0, 2.0, 0.01), repeats)
    results["lxf_2d"] = timeit(lambda: k.lxf_step_2d(U, 1e-3, 1.0 / nx, 1.0 / ny, 1.0),
                               repeats)
    results["local_rk4_2d"] = timeit(
        lambda: k.local_step_rk4_2d(U.copy(), None, None, 1.0, 2.0, 1e-3), repeats)
    return results


def bench_steps(backend, cells, nx, ny, repeats):
    params = PhysParams()
    U1 = np.zeros((8, cells))
    r = (np.arange(cells) + 0.5) / cells
    U1[0] = 1.0 + 0.1 * np.sin(2 * np.pi * r)
    U1[1] = 0.1 * np.sin(2 * np.pi * r)
    U1[2] = 0.05
    f1 = solver1d.Field1D(0.0, 1.0, U1, "periodic")
    cfg1 = solver1d.SolverConfig1D(cfl=0.5, t_end=1.0)
    dt1 = solver1d.time_step(f1, cfg1, params)

    U2 = np.zeros((12, nx, ny))
    U2[0] = 1.0 + 0.1 * np.sin(2 * np.pi * (np.arange(nx) + 0.5) / nx)[:, None]
    U2[1] = 0.05
    f2 = solver2d.Field2D(0.0, 1.0, 0.0, 1.0, U2)
    cfg2 = solver2d.SolverConfig2D(cfl=0.9, t_end=1.0)
    dt2 = solver2d.time_step_2d(f2, cfg2, params)

    return {
        "step_1d": timeit(lambda: solver1d.step(f1, None, dt1, cfg1, params), repeats),
        "step_2d": timeit(lambda: solver2d.step_2d(f2, None, dt2, params, cfg2), repeats),
    }


def main():
    ap = argparse.ArgumentParser(description="kernel backend benchmark")
    ap.add_argument("--cells", type=int, default=8192, help="1D cells")
    ap.add_argument("--nx", type=int, default=96, help="2D cells in x")
    ap.add_argument("--ny", type=int, default=96, help="2D cells in y")
    ap.add_argument("--repeats", type=int, default=30)
    args = ap.parse_args()

    available = _backend.available()
    if "cython" not in available:
        print("compiled extension not built; timing the NumPy backend only")

    table = {}
    for backend in available:
        _backend.use(backend)
        table[backend] = bench_kernels(backend, args.cells, args.nx, args.ny,
                                       args.repeats)
        table[backend].update(bench_steps(backend, args.cells, args.nx, args.ny,
                                          args.repeats))

    names = list(next(iter(table.values())))
    print(f"\n1D cells: {args.cells}, 2D grid: {args.nx}x{args.ny}, "
          f"best of {args.repeats}\n")
    header = f"{'kernel':<14}" + "".join(f"{b:>12}" for b in available)
    if len(available) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name in names:
        row = f"{name:<14}"
        for backend in available:
            row += f"{table[backend][name] * 1e6:>10.1f}us"
        if len(available) == 2:
            row += f"{table['numpy'][name] / table['cython'][name]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()

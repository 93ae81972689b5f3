#!/usr/bin/env python3
"""Benchmark the RHS kernels on both backends.

Times the streaming and collision right-hand sides on the production diode
grid and a mid-size MOSFET grid, for every available backend (numba jitted
loops vs the pure-numpy fallback selected by BOLTDEV_KERNELS).

Usage: python benchmarks/bench_kernels.py [--repeat 20]
"""

import argparse
import time

import numpy as np

from boltdev.backend import available_backends
from boltdev.basis import DGField
from boltdev.collision import apply_collision
from boltdev.constants import default_silicon
from boltdev.mesh import preset_diode_mesh, preset_mosfet_mesh
from boltdev.quadtables import build_collision_tables, build_streaming_tables
from boltdev.transport import transport_rhs_1d, transport_rhs_2d


def time_call(fn, repeat):
    fn()  # warm up (jit compile, page in)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_1d(backend, repeat):
    const = default_silicon()
    grid = preset_diode_mesh("diode400")
    st = build_streaming_tables(grid, const)
    ct = build_collision_tables(grid, const)
    rng = np.random.RandomState(0)
    f = DGField.zeros(grid)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    e = rng.normal(size=grid.x.n) * 30
    out = np.empty_like(f.interior)
    t_tr = time_call(
        lambda: transport_rhs_1d(f, e, st, grid, const, backend=backend, out=out), repeat
    )
    t_col = time_call(
        lambda: apply_collision(f, ct, grid, backend=backend, out=out), repeat
    )
    return grid.phase_cells, t_tr, t_col


def bench_2d(backend, repeat):
    const = default_silicon()
    grid = preset_mosfet_mesh(n_x=12, n_y=7, n_w=60, n_mu=8, n_phi=6)
    st = build_streaming_tables(grid, const)
    ct = build_collision_tables(grid, const)
    rng = np.random.RandomState(0)
    f = DGField.zeros(grid)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    ex = rng.normal(size=(grid.x.n, grid.y.n)) * 30
    ey = rng.normal(size=(grid.x.n, grid.y.n)) * 30
    out = np.empty_like(f.interior)
    t_tr = time_call(
        lambda: transport_rhs_2d(f, ex, ey, st, grid, const, backend=backend, out=out),
        repeat,
    )
    t_col = time_call(
        lambda: apply_collision(f, ct, grid, backend=backend, out=out), repeat
    )
    return grid.phase_cells, t_tr, t_col


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    rows = []
    for backend in backends:
        n1, tr1, col1 = bench_1d(backend, args.repeat)
        n2, tr2, col2 = bench_2d(backend, args.repeat)
        rows.append((backend, n1, tr1, col1, n2, tr2, col2))
    print(f"{'backend':8s} {'1D cells':>9s} {'transport':>11s} {'collision':>11s} "
          f"{'2D cells':>9s} {'transport':>11s} {'collision':>11s}")
    for backend, n1, tr1, col1, n2, tr2, col2 in rows:
        print(f"{backend:8s} {n1:9d} {tr1*1e3:9.2f} ms {col1*1e3:9.2f} ms "
              f"{n2:9d} {tr2*1e3:9.2f} ms {col2*1e3:9.2f} ms")
    if len(rows) == 2:
        nb, py = rows[0], rows[1]
        print(f"speedup (numba vs numpy): 1D transport x{py[2]/nb[2]:.1f}, "
              f"collision x{py[3]/nb[3]:.1f}; 2D transport x{py[5]/nb[5]:.1f}, "
              f"collision x{py[6]/nb[6]:.1f}")


if __name__ == "__main__":
    main()

"""Command-line driver.

Subcommands: ``run`` (config-driven transient with CSV emission),
``poisson-test`` (manufactured-solution convergence table),
``tables-dump`` (precomputed quadrature tables as text) and ``presets``
(built-in device list).  Scalar flags override the config file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .backend import ENV_FLAG, available_backends, backend_name
from .config import ConfigError, RunConfig, load_config, save_config
from .device import preset_devices
from .output import write_macroscopic, write_pdf_slice, write_tables_dump
from .stepper import Simulation


def _add_run_parser(sub):
    p = sub.add_parser("run", help="run a transient simulation from a config file")
    p.add_argument("--config", type=Path, help="run configuration file")
    p.add_argument("--device", help="device preset (used when no config is given)")
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--cfl", type=float)
    p.add_argument("--wmax", type=float)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--backend", choices=("numba", "numpy", "auto"))
    p.add_argument("--log-every", type=int, dest="log_every")


def _build_config(args) -> RunConfig:
    import dataclasses

    if args.config is not None:
        cfg = load_config(args.config)
    else:
        presets = preset_devices()
        name = args.device or "diode400"
        if name not in presets:
            raise ConfigError(f"unknown preset {name!r}; have {sorted(presets)}")
        dev = presets[name]
        cfg = RunConfig(
            device=dev,
            scheme="euler" if dev.kind == "mosfet" else "rk2",
            t_end=0.5 if dev.kind == "mosfet" else 5.0,
        )
    overrides = {}
    if args.t_end is not None:
        overrides["t_end"] = args.t_end
    if args.cfl is not None:
        overrides["cfl"] = args.cfl
    if args.wmax is not None:
        overrides["w_max"] = args.wmax
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if args.log_every is not None:
        overrides["log_every"] = args.log_every
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def _cmd_run(args) -> int:
    cfg = _build_config(args)
    if args.backend:
        os.environ[ENV_FLAG] = args.backend
    grid = cfg.build_grid()
    sim = Simulation(
        cfg.device, grid, const=cfg.constants, scheme=cfg.scheme, cfl=cfg.cfl
    )
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_config(cfg, out_dir / "run.cfg")
    digest = cfg.digest()

    def emit(state):
        tag = f"t{state.t:.6g}"
        write_macroscopic(
            out_dir / f"macro_{tag}.csv",
            state.field, state.poisson, grid, cfg.device, sim.const, sim.conv,
            sim.streaming_tables, t=state.t, step=state.step, config_digest=digest,
        )
        for x0 in cfg.slice_positions:
            y_list = cfg.slice_positions_y if grid.is_2d else (None,)
            for y0 in y_list:
                name = f"pdf_x{x0:.6g}" + (f"_y{y0:.6g}" if y0 is not None else "") + f"_{tag}.csv"
                write_pdf_slice(
                    out_dir / name, state.field, grid, sim.const, x0, y0,
                    cartesian=cfg.cartesian_pdf, t=state.t, step=state.step,
                    config_digest=digest,
                )

    print(
        f"boltdev {__version__}: device={cfg.device.name} grid={grid.phase_cells} cells "
        f"scheme={cfg.scheme} backend={backend_name()} t_end={cfg.t_end}",
        file=sys.stderr,
    )
    final = sim.run_transient(
        cfg.t_end,
        snapshot_times=cfg.snapshot_times,
        on_snapshot=emit,
        log_every=cfg.log_every,
    )
    emit(final)
    print(
        f"done: t={final.t:.6g} steps={final.step} mass={final.mass:.6e} "
        f"momentum_uniformity={sim.momentum_uniformity(final):.3e}",
        file=sys.stderr,
    )
    return 0


def _cmd_poisson_test(args) -> int:
    from .poisson import manufactured_convergence_1d, manufactured_convergence_2d

    cells = tuple(int(c) for c in args.cells.split(","))
    errs1, orders1 = manufactured_convergence_1d(cells)
    print("1D  Psi = sin(pi x):")
    for n, e in zip(cells, errs1):
        print(f"  n={n:5d}  L2={e:.6e}")
    print("  observed orders: " + ", ".join(f"{o:.3f}" for o in orders1))
    cells2 = tuple(int(c) for c in args.cells_2d.split(","))
    errs2, orders2 = manufactured_convergence_2d(cells2)
    print("2D  Psi = sin(pi x) sin(pi y):")
    for n, e in zip(cells2, errs2):
        print(f"  n={n:5d}  L2={e:.6e}")
    print("  observed orders: " + ", ".join(f"{o:.3f}" for o in orders2))
    if args.dump_matrix:
        import scipy.io

        from .mesh import Axis
        from .poisson import LDGPoisson1D, PoissonBC1D

        solver = LDGPoisson1D(
            Axis(np.linspace(0.0, 1.0, cells[0] + 1)), 11.7, PoissonBC1D(), c_v=1.0
        )
        scipy.io.mmwrite(args.dump_matrix, solver.matrix)
        print(f"wrote system matrix to {args.dump_matrix}")
    ok = all(o >= 1.9 for o in orders1 + orders2)
    print("PASS" if ok else "FAIL", "(orders >= 1.9)")
    return 0 if ok else 1


def _cmd_tables_dump(args) -> int:
    from .constants import default_silicon
    from .device import device_mesh, preset_devices
    from .quadtables import build_collision_tables, build_streaming_tables

    presets = preset_devices()
    if args.device not in presets:
        print(f"unknown device {args.device!r}; have {sorted(presets)}", file=sys.stderr)
        return 1
    dev = presets[args.device]
    kw = {"w_max": args.wmax}
    if dev.kind == "diode" and args.n_w:
        kw["n_w"] = args.n_w
    grid = device_mesh(dev, **kw)
    const = default_silicon()
    ct = build_collision_tables(grid, const)
    st = build_streaming_tables(grid, const)
    write_tables_dump(args.out, ct, st, const, grid)
    print(f"wrote tables for {args.device} to {args.out}", file=sys.stderr)
    return 0


def _cmd_presets(_args) -> int:
    for name, dev in preset_devices().items():
        pots = ", ".join(f"{k}={v:g} V" for k, v in dev.contact_potentials().items())
        print(
            f"{name}: {dev.kind}, length {dev.length_x:g}, channel "
            f"[{dev.channel[0]:g}, {dev.channel[1]:g}], N+ {dev.n_plus_cm3:g} cm^-3, "
            f"N- {dev.n_minus_cm3:g} cm^-3, {pots}"
        )
    print(f"kernel backends available: {', '.join(available_backends())}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="boltdev",
        description="Deterministic kinetic solver for silicon diodes and double-gate MOSFETs",
    )
    parser.add_argument("--version", action="version", version=f"boltdev {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    p = sub.add_parser("poisson-test", help="manufactured-solution convergence check")
    p.add_argument("--cells", default="32,64,128", help="comma-separated 1D cell counts")
    p.add_argument("--cells-2d", dest="cells_2d", default="16,32,64", help="comma-separated 2D cell counts")
    p.add_argument("--dump-matrix", type=Path, help="write the assembled 1D system (matrix market)")
    p = sub.add_parser("tables-dump", help="dump precomputed quadrature tables")
    p.add_argument("--device", default="diode400")
    p.add_argument("--n-w", type=int, dest="n_w")
    p.add_argument("--wmax", type=float, default=40.0)
    p.add_argument("--out", type=Path, required=True)
    sub.add_parser("presets", help="list built-in devices")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "poisson-test":
            return _cmd_poisson_test(args)
        if args.command == "tables-dump":
            return _cmd_tables_dump(args)
        if args.command == "presets":
            return _cmd_presets(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FloatingPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())

"""CSV emission: macroscopic profiles, distribution slices, table dumps.

Every file starts with a provenance comment block (constants, grid hash,
config digest, time, backend) so any plot can be traced to its run.
Values are written with 17 significant digits; files are deterministic
given the run configuration, including row order.
"""

from __future__ import annotations

import io
from typing import Optional

import numpy as np

from .backend import backend_name
from .basis import DGField
from .constants import ConversionFactors, ScaledConstants
from .device import DeviceSpec
from .mesh import PhaseGrid
from .moments import density, energy, momentum_and_velocity
from .quadtables import CollisionTables, StreamingTables

__all__ = [
    "provenance_header",
    "write_macroscopic",
    "write_pdf_slice",
    "write_tables_dump",
]


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def provenance_header(
    const: ScaledConstants,
    grid: PhaseGrid,
    t: float,
    step: int,
    config_digest: str = "",
    extra: Optional[dict] = None,
) -> str:
    lines = ["# boltdev output"]
    for k, v in const.header_items():
        lines.append(f"# constant {k} = {float(v)!r}")
    lines.append(f"# grid_hash = {grid.grid_hash()}")
    lines.append(f"# t = {_fmt(t)}")
    lines.append(f"# step = {step}")
    lines.append(f"# backend = {backend_name()}")
    if config_digest:
        lines.append(f"# config_digest = {config_digest}")
    for k, v in (extra or {}).items():
        lines.append(f"# {k} = {v}")
    return "\n".join(lines) + "\n"


def write_macroscopic(
    path,
    field: DGField,
    poisson,
    grid: PhaseGrid,
    device: DeviceSpec,
    const: ScaledConstants,
    conv: ConversionFactors,
    tables: StreamingTables,
    t: float = 0.0,
    step: int = 0,
    config_digest: str = "",
) -> None:
    """One row per spatial cell center with dimensional and raw columns."""
    mv = momentum_and_velocity(field, tables, grid, const.c_x, conv)
    en = energy(field, grid)
    rho = mv["density"]
    contacts = ", ".join(f"{k}:{_fmt(v)}" for k, v in device.contact_potentials().items())
    hdr = provenance_header(
        const, grid, t, step, config_digest,
        extra={"device": device.name, "contact_potentials_V": contacts},
    )
    buf = io.StringIO()
    buf.write(hdr)
    if grid.is_2d:
        cols = [
            "x", "y", "density_cm3", "velocity_x_cm_s", "velocity_y_cm_s", "energy_eV",
            "Efield_x_kV_cm", "Efield_y_kV_cm", "potential_V", "momentum_x_cm2_s",
            "density", "density_slope_x", "density_slope_y", "velocity_x", "velocity_y",
            "mean_energy_w", "Efield_x", "Efield_y", "potential", "potential_slope_x",
            "potential_slope_y", "momentum_x", "momentum_y", "quality",
        ]
        buf.write(",".join(cols) + "\n")
        ex = poisson.ex_cell
        ey = poisson.ey_cell
        for i, xc in enumerate(grid.x.centers):
            for j, yc in enumerate(grid.y.centers):
                ok = bool(mv["velocity_x"].quality[i, j])
                row = [
                    xc, yc,
                    conv.density_cm3(rho.mean[i, j]),
                    conv.velocity_cm_s(mv["velocity_x"].mean[i, j]),
                    conv.velocity_cm_s(mv["velocity_y"].mean[i, j]),
                    conv.energy_ev(en["mean_energy"].mean[i, j]),
                    ex[i, j] * conv.efield_factor_kv_cm,
                    ey[i, j] * conv.efield_factor_kv_cm,
                    poisson.psi[i, j, 0] * conv.voltage_scale,
                    conv.momentum_cm2_s(mv["momentum_x"].mean[i, j]),
                    rho.mean[i, j], rho.slope_x[i, j], rho.slope_y[i, j],
                    mv["velocity_x"].mean[i, j], mv["velocity_y"].mean[i, j],
                    en["mean_energy"].mean[i, j],
                    ex[i, j], ey[i, j],
                    poisson.psi[i, j, 0], poisson.psi[i, j, 1], poisson.psi[i, j, 2],
                    mv["momentum_x"].mean[i, j], mv["momentum_y"].mean[i, j],
                ]
                buf.write(",".join(_fmt(v) for v in row) + f",{int(ok)}\n")
    else:
        cols = [
            "x", "density_cm3", "velocity_x_cm_s", "energy_eV", "Efield_x_kV_cm",
            "potential_V", "momentum_cm2_s",
            "density", "density_slope_x", "velocity_x", "mean_energy_w", "Efield_x",
            "potential", "potential_slope_x", "momentum_x", "quality",
        ]
        buf.write(",".join(cols) + "\n")
        e_cell = poisson.e_cell
        for i, xc in enumerate(grid.x.centers):
            ok = bool(mv["velocity_x"].quality[i])
            row = [
                xc,
                conv.density_cm3(rho.mean[i]),
                conv.velocity_cm_s(mv["velocity_x"].mean[i]),
                conv.energy_ev(en["mean_energy"].mean[i]),
                e_cell[i] * conv.efield_factor_kv_cm,
                poisson.psi[i, 0] * conv.voltage_scale,
                conv.momentum_cm2_s(mv["momentum_x"].mean[i]),
                rho.mean[i], rho.slope_x[i],
                mv["velocity_x"].mean[i],
                en["mean_energy"].mean[i],
                e_cell[i],
                poisson.psi[i, 0], poisson.psi[i, 1],
                mv["momentum_x"].mean[i],
            ]
            buf.write(",".join(_fmt(v) for v in row) + f",{int(ok)}\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def pdf_slice_values(
    field: DGField, grid: PhaseGrid, x0: float, y0: Optional[float] = None
) -> np.ndarray:
    """Phi on the (w, mu) cell centers at a spatial point (phi averaged out in 2D)."""
    i = grid.x.cell_of(x0)
    xi = 2.0 * (x0 - grid.x.centers[i]) / grid.x.widths[i]
    if grid.is_2d:
        if y0 is None:
            raise ValueError("2D slice needs a y position")
        j = grid.y.cell_of(y0)
        eta = 2.0 * (y0 - grid.y.centers[j]) / grid.y.widths[j]
        vals = (
            field.comp("T")[i, j]
            + xi * field.comp("X")[i, j]
            + eta * field.comp("Y")[i, j]
        )  # (Nw, Nmu, Nphi); phi-average over [0, pi]
        return np.einsum("kmn,n->km", vals, grid.phi.widths) / np.pi
    return field.comp("T")[i] + xi * field.comp("X")[i]


def write_pdf_slice(
    path,
    field: DGField,
    grid: PhaseGrid,
    const: ScaledConstants,
    x0: float,
    y0: Optional[float] = None,
    cartesian: bool = False,
    t: float = 0.0,
    step: int = 0,
    config_digest: str = "",
) -> None:
    """Distribution slice on the (w, mu) grid, optionally with cartesian
    momentum coordinates V1 (parallel to the force) and V2 (orthogonal)."""
    vals = pdf_slice_values(field, grid, x0, y0)
    loc = {"slice_x0": _fmt(x0)}
    if y0 is not None:
        loc["slice_y0"] = _fmt(y0)
    hdr = provenance_header(const, grid, t, step, config_digest, extra=loc)
    buf = io.StringIO()
    buf.write(hdr)
    cols = ["w", "mu", "phi_value"]
    if cartesian:
        cols += ["v1", "v2"]
    buf.write(",".join(cols) + "\n")
    a = const.alpha_k
    for k, wc in enumerate(grid.w.centers):
        for m, mc in enumerate(grid.mu.centers):
            row = [wc, mc, vals[k, m]]
            if cartesian:
                mom = np.sqrt(wc * (1.0 + a * wc))
                row += [mom * mc, mom * np.sqrt(max(1.0 - mc * mc, 0.0))]
            buf.write(",".join(_fmt(v) for v in row) + "\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def write_tables_dump(
    path,
    ctables: CollisionTables,
    stables: StreamingTables,
    const: ScaledConstants,
    grid: PhaseGrid,
) -> None:
    """Plain-text dump of every precomputed table entry for cross-checks."""
    buf = io.StringIO()
    buf.write(provenance_header(const, grid, 0.0, 0))
    sig_names = ("minus_gamma", "zero", "plus_gamma")
    nw = ctables.n_w
    for s_idx, s_name in enumerate(sig_names):
        for a in range(4):
            arr = ctables.overlap[s_idx, a]
            for k in range(nw):
                for kp in range(nw):
                    if arr[k, kp] != 0.0:
                        buf.write(f"overlap {s_name} w{a} {k} {kp} {_fmt(arr[k, kp])}\n")
    for q in range(3):
        for k in range(nw):
            buf.write(f"loss q{q} {k} {_fmt(ctables.loss[q, k])}\n")
    for name, arr in (("s1m", stables.s1m), ("s2m", stables.s2m)):
        for q in range(3):
            for k in range(nw):
                buf.write(f"{name} q{q} {k} {_fmt(arr[q, k])}\n")
    for name in ("mu_m", "mu_r", "mu_p", "mu_q", "mu_u"):
        arr = getattr(stables, name)
        for q in range(3):
            for m in range(arr.shape[1]):
                buf.write(f"{name} q{q} {m} {_fmt(arr[q, m])}\n")
    if stables.phi_c is not None:
        for name in ("phi_one", "phi_c", "phi_s"):
            arr = getattr(stables, name)
            for q in range(3):
                for n in range(arr.shape[1]):
                    buf.write(f"{name} q{q} {n} {_fmt(arr[q, n])}\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())

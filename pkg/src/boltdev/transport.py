"""Free-streaming DG residual: advection coefficients and upwind fluxes.

Upwind trace choices depend only on cell-center angles and the sign of the
cell-mean field, exactly as the flux rules prescribe; within a cell the
field enters through its mean value.  All w-integrals come from the
streaming tables, angular factors are integrated in closed form, so no
quadrature runs during time stepping.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import get_kernels
from .basis import DGField
from .constants import ScaledConstants
from .mesh import PhaseGrid
from .quadtables import StreamingTables

__all__ = ["eval_g", "transport_rhs_1d", "transport_rhs_2d"]


def eval_g(
    index: int,
    w: float,
    mu: float,
    phi: float,
    e_x: float,
    e_y: float,
    const: ScaledConstants,
) -> float:
    """Pointwise advection coefficient g_1..g_5 of the transformed system.

    g4 is singular at w = 0 and g5 at mu = +-1; those points are never
    sampled by the scheme (face integrals use the moment tables) and raise
    here.  The 1D reduction is the e_y = 0, phi-free special case.
    """
    a = const.alpha_k
    if w < 0.0 or not (-1.0 <= mu <= 1.0):
        raise ValueError("phase coordinates outside domain")
    root = math.sqrt(w * (1.0 + a * w)) if w > 0.0 else 0.0
    if index == 1:
        return const.c_x * mu * root / (1.0 + 2.0 * a * w)
    if index == 2:
        return const.c_x * math.sqrt(1.0 - mu * mu) * root * math.cos(phi) / (1.0 + 2.0 * a * w)
    if index == 3:
        return (
            -2.0 * const.c_k * root / (1.0 + 2.0 * a * w)
            * (mu * e_x + math.sqrt(1.0 - mu * mu) * math.cos(phi) * e_y)
        )
    if index == 4:
        if w == 0.0:
            raise ValueError("g4 is singular at w = 0")
        smu = math.sqrt(1.0 - mu * mu)
        return -const.c_k * smu / root * (smu * e_x - mu * math.cos(phi) * e_y)
    if index == 5:
        if w == 0.0 or abs(mu) == 1.0:
            raise ValueError("g5 is singular at w = 0 and mu = +-1")
        return const.c_k * math.sin(phi) / (root * math.sqrt(1.0 - mu * mu)) * e_y
    raise ValueError(f"coefficient index must be 1..5, got {index}")


def _require_ghosts(field: DGField) -> None:
    if field.ghost_state is None:
        raise ValueError(
            "ghost layers not populated; apply a boundary closure "
            "(contact_ghosts / specular_ghosts / set_zero_inflow_ghosts) first"
        )


def transport_rhs_1d(
    field: DGField,
    e_cell: np.ndarray,
    tables: StreamingTables,
    grid: PhaseGrid,
    const: ScaledConstants,
    backend: str | None = None,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Streaming RHS for the (x, w, mu) system; needs x ghosts in place."""
    if grid.is_2d:
        raise ValueError("1D transport called on a 2D grid")
    if tables.grid_hash != grid.grid_hash():
        raise ValueError("streaming tables were built for a different grid")
    _require_ghosts(field)
    e_cell = np.ascontiguousarray(e_cell, dtype=np.float64)
    if e_cell.shape != (grid.x.n,):
        raise ValueError("field sample must hold one cell-mean E per x cell")
    if not np.all(np.isfinite(e_cell)):
        raise FloatingPointError("non-finite electric field")
    if out is None:
        out = np.empty_like(field.interior)
    k = get_kernels(backend)
    k.transport_rhs_1d(
        field.data, e_cell,
        grid.x.widths, grid.w.widths,
        tables.s1m, tables.s2m, tables.s1_face,
        tables.mu_m, tables.mu_p, tables.mu_face_p,
        grid.mu.centers, grid.mu.widths,
        const.c_x, const.c_k,
        out,
    )
    return out


def transport_rhs_2d(
    field: DGField,
    e_x: np.ndarray,
    e_y: np.ndarray,
    tables: StreamingTables,
    grid: PhaseGrid,
    const: ScaledConstants,
    backend: str | None = None,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Streaming RHS for the (x, y, w, mu, phi) system; needs x and y ghosts."""
    if not grid.is_2d:
        raise ValueError("2D transport called on a 1D grid")
    if tables.grid_hash != grid.grid_hash():
        raise ValueError("streaming tables were built for a different grid")
    _require_ghosts(field)
    shape = (grid.x.n, grid.y.n)
    e_x = np.ascontiguousarray(e_x, dtype=np.float64)
    e_y = np.ascontiguousarray(e_y, dtype=np.float64)
    if e_x.shape != shape or e_y.shape != shape:
        raise ValueError("field samples must hold one cell-mean (E_x, E_y) per spatial cell")
    if not (np.all(np.isfinite(e_x)) and np.all(np.isfinite(e_y))):
        raise FloatingPointError("non-finite electric field")
    if out is None:
        out = np.empty_like(field.interior)
    k = get_kernels(backend)
    k.transport_rhs_2d(
        field.data, e_x, e_y,
        grid.x.widths, grid.y.widths, grid.w.widths, grid.mu.widths, grid.phi.widths,
        tables.s1m, tables.s2m, tables.s1_face,
        tables.mu_m, tables.mu_r, tables.mu_p, tables.mu_q, tables.mu_u,
        tables.mu_face_p, tables.mu_face_r, grid.mu.edges, grid.mu.centers,
        tables.phi_one, tables.phi_c, tables.phi_s, tables.phi_face_sin,
        np.cos(grid.phi.centers),
        const.c_x, const.c_k,
        out,
    )
    return out

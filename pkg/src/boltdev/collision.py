"""Phonon collision operator applied to a DG field.

The gain side couples energy cells through the precomputed shifted-overlap
integrals and feeds only the test functions that survive the angular
integration (constant, spatial slopes and the energy slope); the loss side
is diagonal with the per-cell moments of the loss frequency.  In the 1D
reduction the primed angular integral contributes a factor pi.
"""

from __future__ import annotations

import numpy as np

from .backend import get_kernels
from .basis import DGField
from .mesh import PhaseGrid
from .quadtables import CollisionTables

__all__ = ["apply_collision"]


def apply_collision(
    field: DGField,
    tables: CollisionTables,
    grid: PhaseGrid,
    backend: str | None = None,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Per-cell coefficient rates from the collision operator.

    Returns an array shaped like ``field.interior``.  Linear in the field;
    ghost layers are not read.
    """
    if tables.grid_hash != grid.grid_hash():
        raise ValueError("collision tables were built for a different grid")
    if out is None:
        out = np.empty_like(field.interior)
    k = get_kernels(backend)
    if grid.is_2d:
        k.collision_rhs_2d(
            field.data,
            tables.gain0, tables.gain1, tables.gain2, tables.gain3,
            tables.loss,
            grid.mu.widths, grid.phi.widths, grid.w.widths,
            1.0,
            out,
        )
    else:
        k.collision_rhs_1d(
            field.data,
            tables.gain0, tables.gain1, tables.gain2, tables.gain3,
            tables.loss,
            grid.mu.widths, grid.w.widths,
            np.pi,
            out,
        )
    return out

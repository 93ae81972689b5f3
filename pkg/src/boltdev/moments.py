"""Macroscopic moments of the distribution: density, momentum, velocity, energy.

Densities come out as piecewise linears in space (their cell averages feed
the Poisson right-hand side); momentum, velocity and mean energy are
reported at cell centers, where the spatial slope terms vanish.  The 1D
reduction carries the prefactor pi from the already-integrated azimuth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import DGField
from .constants import ConversionFactors
from .mesh import PhaseGrid
from .quadtables import StreamingTables

__all__ = ["MacroField", "density", "momentum_and_velocity", "energy"]

RHO_FLOOR = 1e-300


@dataclass(frozen=True)
class MacroField:
    """Cell data for one macroscopic quantity (mean plus spatial slopes)."""

    mean: np.ndarray
    slope_x: Optional[np.ndarray] = None
    slope_y: Optional[np.ndarray] = None
    quality: Optional[np.ndarray] = None  # False where a rho division was floored


def density(field: DGField, grid: PhaseGrid) -> MacroField:
    """Number density as a P1 field in space."""
    if grid.is_2d:
        ang = np.einsum("k,m,n->kmn", grid.w.widths, grid.mu.widths, grid.phi.widths)
        t = np.einsum("ijkmn,kmn->ij", field.comp("T"), ang)
        x = np.einsum("ijkmn,kmn->ij", field.comp("X"), ang)
        y = np.einsum("ijkmn,kmn->ij", field.comp("Y"), ang)
        return MacroField(mean=t, slope_x=x, slope_y=y)
    ang = np.outer(grid.w.widths, grid.mu.widths)
    t = np.pi * np.einsum("ikm,km->i", field.comp("T"), ang)
    x = np.pi * np.einsum("ikm,km->i", field.comp("X"), ang)
    return MacroField(mean=t, slope_x=x)


def momentum_and_velocity(
    field: DGField,
    tables: StreamingTables,
    grid: PhaseGrid,
    const_c_x: float,
    conv: ConversionFactors,
) -> dict[str, MacroField]:
    """Momentum densities and mean velocities (dimensionless).

    Velocities are momentum / density at cell centers; cells with density
    below the floor report zero velocity and a cleared quality flag.
    """
    rho = density(field, grid)
    out: dict[str, MacroField] = {}
    if grid.is_2d:
        g1, g1w, g1mu = tables.g1_tables(const_c_x)
        dphi = grid.phi.widths
        mom_x = (
            np.einsum("ijkmn,km,n->ij", field.comp("T"), g1, dphi)
            + np.einsum("ijkmn,km,n->ij", field.comp("W"), g1w, dphi)
            + np.einsum("ijkmn,km,n->ij", field.comp("M"), g1mu, dphi)
        )
        mom_x_sx = np.einsum("ijkmn,km,n->ij", field.comp("X"), g1, dphi)
        mom_x_sy = np.einsum("ijkmn,km,n->ij", field.comp("Y"), g1, dphi)
        g2, g2w, g2mu, g2phi = tables.g2_tables(const_c_x)
        mom_y = (
            np.einsum("ijkmn,kmn->ij", field.comp("T"), g2)
            + np.einsum("ijkmn,kmn->ij", field.comp("W"), g2w)
            + np.einsum("ijkmn,kmn->ij", field.comp("M"), g2mu)
            + np.einsum("ijkmn,kmn->ij", field.comp("P"), g2phi)
        )
        mom_y_sx = np.einsum("ijkmn,kmn->ij", field.comp("X"), g2)
        mom_y_sy = np.einsum("ijkmn,kmn->ij", field.comp("Y"), g2)
        ok = rho.mean > RHO_FLOOR
        vel_x = np.where(ok, mom_x / np.where(ok, rho.mean, 1.0), 0.0)
        vel_y = np.where(ok, mom_y / np.where(ok, rho.mean, 1.0), 0.0)
        out["momentum_x"] = MacroField(mean=mom_x, slope_x=mom_x_sx, slope_y=mom_x_sy)
        out["momentum_y"] = MacroField(mean=mom_y, slope_x=mom_y_sx, slope_y=mom_y_sy)
        out["velocity_x"] = MacroField(mean=vel_x, quality=ok)
        out["velocity_y"] = MacroField(mean=vel_y, quality=ok)
    else:
        g1, g1w, g1mu = tables.g1_tables(const_c_x)
        mom = np.pi * (
            np.einsum("ikm,km->i", field.comp("T"), g1)
            + np.einsum("ikm,km->i", field.comp("W"), g1w)
            + np.einsum("ikm,km->i", field.comp("M"), g1mu)
        )
        mom_sx = np.pi * np.einsum("ikm,km->i", field.comp("X"), g1)
        ok = rho.mean > RHO_FLOOR
        vel = np.where(ok, mom / np.where(ok, rho.mean, 1.0), 0.0)
        out["momentum_x"] = MacroField(mean=mom, slope_x=mom_sx)
        out["velocity_x"] = MacroField(mean=vel, quality=ok)
    out["density"] = rho
    return out


def energy(field: DGField, grid: PhaseGrid) -> dict[str, MacroField]:
    """Energy density and mean energy per particle (dimensionless)."""
    rho = density(field, grid)
    wk = grid.w.centers * grid.w.widths  # integral of w over each cell
    wk2 = grid.w.widths**2 / 6.0  # integral of w * xi_w
    if grid.is_2d:
        ang = np.einsum("m,n->mn", grid.mu.widths, grid.phi.widths)
        edens = np.einsum("ijkmn,k,mn->ij", field.comp("T"), wk, ang) + np.einsum(
            "ijkmn,k,mn->ij", field.comp("W"), wk2, ang
        )
        edens_sx = np.einsum("ijkmn,k,mn->ij", field.comp("X"), wk, ang)
        edens_sy = np.einsum("ijkmn,k,mn->ij", field.comp("Y"), wk, ang)
        ok = rho.mean > RHO_FLOOR
        mean_w = np.where(ok, edens / np.where(ok, rho.mean, 1.0), 0.0)
        return {
            "energy_density": MacroField(mean=edens, slope_x=edens_sx, slope_y=edens_sy),
            "mean_energy": MacroField(mean=mean_w, quality=ok),
            "density": rho,
        }
    edens = np.pi * (
        np.einsum("ikm,k,m->i", field.comp("T"), wk, grid.mu.widths)
        + np.einsum("ikm,k,m->i", field.comp("W"), wk2, grid.mu.widths)
    )
    edens_sx = np.pi * np.einsum("ikm,k,m->i", field.comp("X"), wk, grid.mu.widths)
    ok = rho.mean > RHO_FLOOR
    mean_w = np.where(ok, edens / np.where(ok, rho.mean, 1.0), 0.0)
    return {
        "energy_density": MacroField(mean=edens, slope_x=edens_sx),
        "mean_energy": MacroField(mean=mean_w, quality=ok),
        "density": rho,
    }

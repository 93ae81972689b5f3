"""Device descriptions: doping profiles, contacts, initial state, ghosts.

Doping junctions are smoothed with the cubic blend (1 - y**3)**3 over a
transition region two cells wide on the local mesh, which is what keeps the
computed profiles non-oscillatory without any limiter.  Contacts realize
charge neutrality by scaling the adjacent interior distribution so that the
ghost density equals the doping there; walls in y reflect specularly via
phi -> pi - phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import DGField
from .constants import ConversionFactors, ScaledConstants
from .mesh import Axis, PhaseGrid, preset_diode_mesh, preset_mosfet_mesh
from .quadtables import maxwellian_cell_moments

__all__ = [
    "DeviceSpec",
    "smoothed_doping",
    "doping_profile",
    "doping_coefficients",
    "initial_condition",
    "contact_ghosts",
    "specular_ghosts",
    "set_zero_inflow_ghosts",
    "preset_devices",
    "device_mesh",
]


@dataclass(frozen=True)
class DeviceSpec:
    """Geometry, doping and contact data for one device.

    Lengths are dimensionless (units of 1 micron).  Doping levels are given
    in cm^-3 as in the fabrication data and converted on demand.  For the
    MOSFET the gate span lives on the top oxide edge and the source/drain
    Dirichlet values apply on the silicon part of the left/right edges.
    """

    name: str
    kind: str  # "diode" | "mosfet"
    length_x: float
    channel: tuple[float, float]
    n_plus_cm3: float
    n_minus_cm3: float
    v_bias: float = 1.0
    transition_cells: int = 2
    # mosfet geometry and contacts
    si_half_height: float = 0.12
    oxide_thickness: float = 0.012
    oxide_rows: int = 2
    gate_span: tuple[float, float] = (0.05, 0.10)
    psi_source: float = 0.52354
    psi_drain: float = 1.5235
    psi_gate: float = 1.06

    def __post_init__(self) -> None:
        if self.kind not in ("diode", "mosfet"):
            raise ValueError(f"unknown device kind {self.kind!r}")
        c0, c1 = self.channel
        if not (0.0 <= c0 < c1 <= self.length_x):
            raise ValueError("channel must lie inside the device")
        if self.n_plus_cm3 <= 0.0 or self.n_minus_cm3 <= 0.0:
            raise ValueError("doping levels must be positive")

    def doping_dimless(self, conv: ConversionFactors) -> tuple[float, float]:
        """(N+, N-) scaled by the density factor."""
        f = 1e6 / conv.density_factor  # cm^-3 -> m^-3 -> dimensionless
        return self.n_plus_cm3 * f, self.n_minus_cm3 * f

    def contact_potentials(self) -> dict[str, float]:
        if self.kind == "diode":
            return {"source": 0.0, "drain": self.v_bias}
        return {"source": self.psi_source, "drain": self.psi_drain, "gate": self.psi_gate}


def smoothed_doping(
    x, x0: float, half_width: float, n_hi: float, n_lo: float, rising: bool = False
):
    """Single-junction blend n_lo + (n_hi - n_lo) (1 - y**3)**3.

    The transition region is (x0 - half_width, x0 + half_width).  With
    ``rising=False`` the profile falls from n_hi on the left to n_lo on the
    right; ``rising=True`` mirrors it.
    """
    x = np.asarray(x, dtype=np.float64)
    y = (x - x0 + half_width) / (2.0 * half_width + 1e-20)
    if rising:
        y = 1.0 - y
    y = np.clip(y, 0.0, 1.0)
    blend = (1.0 - y**3) ** 3
    out = n_lo + (n_hi - n_lo) * blend
    return out if out.ndim else float(out)


def _junction_half_width(device: DeviceSpec, x_axis: Axis, x0: float) -> float:
    # transition length = transition_cells local cells, centered at the junction
    return 0.5 * device.transition_cells * float(x_axis.widths[x_axis.cell_of(x0)])


def doping_profile(device: DeviceSpec, x_axis: Axis, conv: ConversionFactors):
    """Vectorized dimensionless doping N(x) with both junctions smoothed."""
    n_hi, n_lo = device.doping_dimless(conv)
    c0, c1 = device.channel
    d0 = _junction_half_width(device, x_axis, c0)
    d1 = _junction_half_width(device, x_axis, c1)

    def profile(x):
        x = np.asarray(x, dtype=np.float64)
        fall = smoothed_doping(x, c0, d0, n_hi, n_lo)  # n+ -> n- at left junction
        rise = smoothed_doping(x, c1, d1, n_hi, n_lo, rising=True)
        return np.maximum(fall, rise)

    return profile


def doping_coefficients(
    device: DeviceSpec, x_axis: Axis, conv: ConversionFactors, gl_order: int = 6
) -> tuple[np.ndarray, np.ndarray]:
    """Per-x-cell P1 coefficients (mean, xi moment) of the smoothed doping."""
    prof = doping_profile(device, x_axis, conv)
    gx, gw = np.polynomial.legendre.leggauss(gl_order)
    nodes = x_axis.centers[:, None] + 0.5 * x_axis.widths[:, None] * gx[None, :]
    vals = prof(nodes)
    nd_t = 0.5 * np.sum(gw[None, :] * vals, axis=1)
    nd_x = 1.5 * np.sum(gw[None, :] * gx[None, :] * vals, axis=1)
    return nd_t, nd_x


def initial_condition(
    device: DeviceSpec, grid: PhaseGrid, const: ScaledConstants, conv: ConversionFactors
) -> DGField:
    """Local Maxwellian at lattice temperature with density equal to doping.

    Per spatial cell the energy profile is the exact P1 projection of
    s(w) e^-w and the amplitude enforces rho = N_D cell averages.
    """
    m0, m1 = maxwellian_cell_moments(grid.w, const.alpha_k)
    s_total = float(np.sum(m0))
    nd_t, _ = doping_coefficients(device, grid.x, conv)
    f_amp = nd_t / (2.0 * np.pi * s_total)  # (Nx,)

    field = DGField.zeros(grid)
    t_prof = m0 / grid.w.widths  # (Nw,)
    w_prof = 3.0 * m1 / grid.w.widths
    if grid.is_2d:
        field.comp("T")[...] = (
            f_amp[:, None, None, None, None] * t_prof[None, None, :, None, None]
        )
        field.comp("W")[...] = (
            f_amp[:, None, None, None, None] * w_prof[None, None, :, None, None]
        )
    else:
        field.comp("T")[...] = f_amp[:, None, None] * t_prof[None, :, None]
        field.comp("W")[...] = f_amp[:, None, None] * w_prof[None, :, None]
    field.ghost_state = None
    return field


def _cell_density_1d(field: DGField) -> np.ndarray:
    g = field.grid
    return np.pi * np.einsum(
        "ikm,k,m->i", field.comp("T"), g.w.widths, g.mu.widths
    )


def _cell_density_2d(field: DGField) -> np.ndarray:
    g = field.grid
    return np.einsum(
        "ijkmn,k,m,n->ij", field.comp("T"), g.w.widths, g.mu.widths, g.phi.widths
    )


def contact_ghosts(field: DGField, nd_t: np.ndarray, grid: PhaseGrid) -> None:
    """Write the neutral-charge ghost layers at the x contacts in place.

    The ghost cell copies the adjacent interior cell scaled by N_D / rho of
    that cell, so the ghost density equals the doping exactly.  Raises if a
    boundary density is not positive (a blow-up signal).
    """
    if grid.is_2d:
        rho = _cell_density_2d(field)
        for side, interior_col, ghost_col in ((0, 0, 0), (1, -1, -1)):
            rho_col = rho[interior_col]
            if np.any(rho_col <= 0.0):
                raise FloatingPointError("nonpositive density at a contact column")
            scale = (nd_t[interior_col] / rho_col)[None, :, None, None, None]
            src = field.data[:, 1 if side == 0 else -2, 1:-1]
            field.data[:, ghost_col, 1:-1] = src * scale
    else:
        rho = _cell_density_1d(field)
        for interior_idx, ghost_idx in ((0, 0), (-1, -1)):
            if rho[interior_idx] <= 0.0:
                raise FloatingPointError("nonpositive density at a contact cell")
            scale = nd_t[interior_idx] / rho[interior_idx]
            field.data[:, ghost_idx] = field.data[:, 1 if ghost_idx == 0 else -2] * scale
    field.ghost_state = "contact"


def specular_ghosts(field: DGField, grid: PhaseGrid) -> None:
    """Write elastic specular reflection ghosts at both y walls in place.

    The ghost carries the adjacent interior cell's coefficients with the phi
    cell mirrored (n -> N_phi - 1 - n) and the Y and P coefficients negated,
    which reconstructs Phi(x, y_mirror, w, mu, pi - phi).
    """
    if not grid.is_2d:
        raise ValueError("specular ghosts only apply to the 2D grid")
    sym = grid.phi.edges + grid.phi.edges[::-1]
    if not np.allclose(sym, np.pi, rtol=0.0, atol=1e-12):
        raise ValueError("phi grid is not symmetric under phi -> pi - phi")
    iy, ip = 2, 5  # Y and P component slots
    for interior_row, ghost_row in ((1, 0), (-2, -1)):
        src = field.data[:, 1:-1, interior_row, :, :, ::-1].copy()
        src[iy] *= -1.0
        src[ip] *= -1.0
        field.data[:, 1:-1, ghost_row] = src
    if getattr(field, "ghost_state", None) == "contact":
        field.ghost_state = "contact+specular"
    else:
        field.ghost_state = "specular"


def set_zero_inflow_ghosts(field: DGField) -> None:
    """Zero all ghost layers (test closure: nothing enters the domain)."""
    field.zero_ghosts()
    field.ghost_state = "zero"


def reflecting_ghosts_1d(field: DGField, grid: PhaseGrid) -> None:
    """Specular x-wall closure for the 1D system (test mode).

    Mirrors the adjacent interior cell with mu -> -mu, so the walls pass no
    net mass; needs a mu grid symmetric about zero.
    """
    if grid.is_2d:
        raise ValueError("1D reflecting walls only apply to the diode system")
    sym = grid.mu.edges + grid.mu.edges[::-1]
    if not np.allclose(sym, 0.0, atol=1e-13):
        raise ValueError("mu grid is not symmetric about zero")
    for interior_col, ghost_col in ((1, 0), (-2, -1)):
        src = field.data[:, interior_col, :, ::-1].copy()
        src[1] *= -1.0  # X flips under x-mirroring
        src[3] *= -1.0  # M flips with mu -> -mu
        field.data[:, ghost_col] = src
    field.ghost_state = "reflecting"


def specular_wall_mass_flux(field: DGField, tables, grid: PhaseGrid, c_x: float) -> tuple[float, float]:
    """Net outward mass flux through the bottom and top specular walls.

    Uses the same upwind trace rule as the transport kernel; with correctly
    mirrored ghosts the paired phi cells cancel to rounding.
    """
    cosc = np.cos(grid.phi.centers)
    out = []
    for wall, jj_int, jj_ext, outward in (("bottom", 1, 0, -1.0), ("top", -2, -1, +1.0)):
        total = 0.0
        for n in range(grid.phi.n):
            take_lower = cosc[n] > 0.0
            if wall == "top":
                jj = jj_int if take_lower else jj_ext
                tsg = 1.0 if take_lower else -1.0
            else:
                jj = jj_ext if take_lower else jj_int
                tsg = 1.0 if take_lower else -1.0
            b0 = field.data[0, 1:-1, jj, :, :, n] + tsg * field.data[2, 1:-1, jj, :, :, n]
            bw = field.data[3, 1:-1, jj, :, :, n]
            bm = field.data[4, 1:-1, jj, :, :, n]
            bp = field.data[5, 1:-1, jj, :, :, n]
            val = c_x * (
                np.einsum("ikm,i,k,m->", b0, grid.x.widths, tables.s1m[0], tables.mu_r[0])
                * tables.phi_c[0, n]
                + np.einsum("ikm,i,k,m->", bw, grid.x.widths, tables.s1m[1], tables.mu_r[0])
                * tables.phi_c[0, n]
                + np.einsum("ikm,i,k,m->", bm, grid.x.widths, tables.s1m[0], tables.mu_r[1])
                * tables.phi_c[0, n]
                + np.einsum("ikm,i,k,m->", bp, grid.x.widths, tables.s1m[0], tables.mu_r[0])
                * tables.phi_c[1, n]
            )
            total += outward * val
        out.append(total)
    return out[0], out[1]


def preset_devices() -> dict[str, DeviceSpec]:
    """The built-in devices reproduced by the batch drivers."""
    return {
        "diode400": DeviceSpec(
            name="diode400",
            kind="diode",
            length_x=1.0,
            channel=(0.3, 0.7),
            n_plus_cm3=5e17,
            n_minus_cm3=2e15,
            v_bias=1.0,
        ),
        "diode50": DeviceSpec(
            name="diode50",
            kind="diode",
            length_x=0.25,
            channel=(0.1, 0.15),
            n_plus_cm3=5e18,
            n_minus_cm3=1e15,
            v_bias=1.0,
        ),
        "mosfet": DeviceSpec(
            name="mosfet",
            kind="mosfet",
            length_x=0.15,
            channel=(0.05, 0.10),
            n_plus_cm3=5e17,
            n_minus_cm3=2e15,
        ),
    }


def device_mesh(device: DeviceSpec, w_max: float = 40.0, **overrides) -> PhaseGrid:
    """The production grid matching a preset device."""
    if device.name == "diode400":
        return preset_diode_mesh("diode400", w_max=w_max, **overrides)
    if device.name == "diode50":
        return preset_diode_mesh("diode50", w_max=w_max, **overrides)
    if device.kind == "mosfet":
        return preset_mosfet_mesh(
            w_max=w_max,
            x_extent=device.length_x,
            si_half_height=device.si_half_height,
            oxide_thickness=device.oxide_thickness,
            m_y_oxide=device.oxide_rows,
            **overrides,
        )
    raise ValueError(f"no preset mesh for device {device.name!r}")

"""Nonuniform tensor-product phase-space grids and the Poisson spatial grid.

Axes are built from piecewise-uniform breakpoint segments.  The diode grids
are (x, w, mu); the MOSFET grid is (x, y, w, mu, phi) with extra oxide rows
appended to the spatial grid used by the Poisson solve only.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = ["Axis", "PhaseGrid", "build_axis", "uniform_axis",
           "preset_diode_mesh", "preset_mosfet_mesh"]

_DIV_TOL = 1e-12


@dataclass(frozen=True)
class Axis:
    """Strictly increasing cell edges along one coordinate."""

    edges: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.edges, dtype=np.float64)
        if e.ndim != 1 or e.size < 2:
            raise ValueError("axis needs at least two edges")
        if not np.all(np.diff(e) > 0.0):
            raise ValueError("axis edges must be strictly increasing")
        object.__setattr__(self, "edges", e)

    @property
    def n(self) -> int:
        return self.edges.size - 1

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def lo(self) -> float:
        return float(self.edges[0])

    @property
    def hi(self) -> float:
        return float(self.edges[-1])

    def cell_of(self, x: float) -> int:
        """Index of the cell containing x (right-open; last cell closed)."""
        if not (self.lo <= x <= self.hi):
            raise ValueError(f"coordinate {x} outside axis [{self.lo}, {self.hi}]")
        i = int(np.searchsorted(self.edges, x, side="right") - 1)
        return min(max(i, 0), self.n - 1)


def build_axis(breakpoints: Sequence[tuple[float, float, float]]) -> Axis:
    """Concatenate contiguous uniform segments (start, end, cell_width).

    Each width must divide its segment length to within 1e-12 of an integer
    cell count, and successive segments must share endpoints.
    """
    if not breakpoints:
        raise ValueError("no segments given")
    edges = [float(breakpoints[0][0])]
    for seg_i, (a, b, h) in enumerate(breakpoints):
        a, b, h = float(a), float(b), float(h)
        if b <= a:
            raise ValueError(f"segment {seg_i}: end {b} not beyond start {a}")
        if h <= 0.0:
            raise ValueError(f"segment {seg_i}: nonpositive cell width {h}")
        if abs(a - edges[-1]) > _DIV_TOL:
            raise ValueError(f"segment {seg_i} starts at {a}, previous ended at {edges[-1]}")
        ratio = (b - a) / h
        ncell = int(round(ratio))
        if ncell < 1 or abs(ratio - ncell) > _DIV_TOL * max(1.0, ratio):
            raise ValueError(f"segment {seg_i}: width {h} does not divide length {b - a}")
        edges.extend((a + (b - a) * k / ncell) for k in range(1, ncell))
        edges.append(b)
    return Axis(np.array(edges))


def uniform_axis(lo: float, hi: float, n: int) -> Axis:
    return Axis(np.linspace(lo, hi, n + 1))


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular tensor-product grid over (x[, y], w, mu[, phi]).

    For the 2D device, ``oxide_y`` holds extra spatial rows above the
    silicon region; they belong to the Poisson grid only, the transport
    unknowns live on the silicon rows.
    """

    kind: str  # "diode" or "mosfet"
    x: Axis
    w: Axis
    mu: Axis
    y: Optional[Axis] = None
    phi: Optional[Axis] = None
    oxide_y: Optional[Axis] = None

    def __post_init__(self) -> None:
        if self.kind not in ("diode", "mosfet"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if abs(self.w.lo) > 0.0:
            raise ValueError("energy axis must start at 0")
        if abs(self.mu.lo + 1.0) > 1e-14 or abs(self.mu.hi - 1.0) > 1e-14:
            raise ValueError("mu axis must span [-1, 1]")
        if self.mu.n % 2 != 0:
            raise ValueError("number of mu cells must be even")
        if self.kind == "mosfet":
            if self.y is None or self.phi is None:
                raise ValueError("mosfet grid needs y and phi axes")
            if abs(self.phi.lo) > 1e-14 or abs(self.phi.hi - np.pi) > 1e-12:
                raise ValueError("phi axis must span [0, pi]")
            if self.phi.n % 2 != 0:
                raise ValueError("number of phi cells must be even")
            sym = self.phi.edges + self.phi.edges[::-1]
            if not np.allclose(sym, np.pi, rtol=0.0, atol=1e-12):
                raise ValueError("phi edges must be symmetric under phi -> pi - phi")
            if self.oxide_y is not None and abs(self.oxide_y.lo - self.y.hi) > 1e-12:
                raise ValueError("oxide rows must start at the silicon top")
        elif self.y is not None or self.phi is not None or self.oxide_y is not None:
            raise ValueError("diode grid takes only x, w, mu axes")

    @property
    def is_2d(self) -> bool:
        return self.kind == "mosfet"

    @property
    def w_max(self) -> float:
        return self.w.hi

    @property
    def phase_cells(self) -> int:
        n = self.x.n * self.w.n * self.mu.n
        if self.is_2d:
            n *= self.y.n * self.phi.n
        return n

    def poisson_y(self) -> Axis:
        """Spatial y axis for the Poisson solve (silicon plus oxide rows)."""
        if not self.is_2d:
            raise ValueError("poisson_y only defined for the 2D grid")
        if self.oxide_y is None:
            return self.y
        return Axis(np.concatenate([self.y.edges, self.oxide_y.edges[1:]]))

    def mirror_phi(self, n: int) -> int:
        """Cell index image under phi -> pi - phi (0-based involution)."""
        return self.phi.n - 1 - n

    def grid_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.kind.encode())
        for ax in (self.x, self.y, self.w, self.mu, self.phi, self.oxide_y):
            if ax is not None:
                h.update(ax.edges.tobytes())
            h.update(b"|")
        return h.hexdigest()


def preset_diode_mesh(device: str, w_max: float = 40.0, n_w: int = 60) -> PhaseGrid:
    """The production diode grids.

    diode400: 120 x-cells (0.01 outside [0.2, 0.4], 0.005 inside), 60 uniform
    w-cells, 24 mu-cells split 12/12 at mu = 0.7.  diode50: 64 x-cells with
    0.001 cells around both junctions, 60 w-cells, 20 mu-cells split 10/10.
    """
    if device == "diode400":
        x = build_axis([(0.0, 0.2, 0.01), (0.2, 0.4, 0.005), (0.4, 1.0, 0.01)])
        mu = build_axis([(-1.0, 0.7, 1.7 / 12), (0.7, 1.0, 0.3 / 12)])
    elif device == "diode50":
        x = build_axis([(0.0, 0.09, 0.01), (0.09, 0.11, 0.001), (0.11, 0.14, 0.005),
                        (0.14, 0.16, 0.001), (0.16, 0.25, 0.01)])
        mu = build_axis([(-1.0, 0.7, 1.7 / 10), (0.7, 1.0, 0.3 / 10)])
    else:
        raise ValueError(f"unknown diode preset {device!r}")
    return PhaseGrid(kind="diode", x=x, w=uniform_axis(0.0, w_max, n_w), mu=mu)


def preset_mosfet_mesh(
    w_max: float = 40.0,
    x_extent: float = 0.15,
    si_half_height: float = 0.12,
    oxide_thickness: float = 0.012,
    n_x: int = 24,
    n_y: int = 14,
    n_w: int = 120,
    n_mu: int = 8,
    n_phi: int = 6,
    m_y_oxide: int = 2,
) -> PhaseGrid:
    """The production double-gate MOSFET grid (uniform along every axis)."""
    return PhaseGrid(
        kind="mosfet",
        x=uniform_axis(0.0, x_extent, n_x),
        y=uniform_axis(0.0, si_half_height, n_y),
        w=uniform_axis(0.0, w_max, n_w),
        mu=uniform_axis(-1.0, 1.0, n_mu),
        phi=uniform_axis(0.0, np.pi, n_phi),
        oxide_y=uniform_axis(si_half_height, si_half_height + oxide_thickness, m_y_oxide),
    )

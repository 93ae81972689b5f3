"""Piecewise-linear DG representation of the distribution function.

A field stores one coefficient tensor per basis function; on each cell the
reconstruction is

    T + X xi_x [+ Y xi_y] + W xi_w + M xi_mu [+ P xi_phi],

where each xi is the cell-local coordinate 2(u - center)/width.  The basis
is orthogonal per cell: the constant integrates to the cell measure and
every linear factor to measure/3, which is used by all right-hand-side
inversions.  Spatial axes carry one ghost layer on each side so boundary
closures write in place and kernels never branch on the boundary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .constants import ScaledConstants
from .mesh import Axis, PhaseGrid

__all__ = ["DGField", "project", "write_checkpoint", "read_checkpoint"]

COMP_1D = ("T", "X", "W", "M")
COMP_2D = ("T", "X", "Y", "W", "M", "P")


@dataclass
class DGField:
    grid: PhaseGrid
    data: np.ndarray  # ghost-padded: (ncomp, Nx+2, [Ny+2,] Nw, Nmu, [Nphi])
    ghost_state: str | None = None  # which boundary closure last wrote the ghosts

    @classmethod
    def zeros(cls, grid: PhaseGrid) -> "DGField":
        if grid.is_2d:
            shape = (6, grid.x.n + 2, grid.y.n + 2, grid.w.n, grid.mu.n, grid.phi.n)
        else:
            shape = (4, grid.x.n + 2, grid.w.n, grid.mu.n)
        return cls(grid=grid, data=np.zeros(shape))

    @property
    def components(self) -> tuple[str, ...]:
        return COMP_2D if self.grid.is_2d else COMP_1D

    @property
    def interior(self) -> np.ndarray:
        """View of the non-ghost coefficients, shape (ncomp, Nx, [Ny,] ...)."""
        if self.grid.is_2d:
            return self.data[:, 1:-1, 1:-1]
        return self.data[:, 1:-1]

    def comp(self, name: str) -> np.ndarray:
        return self.interior[self.components.index(name)]

    def copy(self) -> "DGField":
        return DGField(grid=self.grid, data=self.data.copy(), ghost_state=self.ghost_state)

    def zero_ghosts(self) -> None:
        if self.grid.is_2d:
            self.data[:, 0] = 0.0
            self.data[:, -1] = 0.0
            self.data[:, :, 0] = 0.0
            self.data[:, :, -1] = 0.0
        else:
            self.data[:, 0] = 0.0
            self.data[:, -1] = 0.0

    def cell_measures(self) -> np.ndarray:
        """Cell volumes broadcast to the interior shape (without ncomp)."""
        g = self.grid
        if g.is_2d:
            return (
                g.x.widths[:, None, None, None, None]
                * g.y.widths[None, :, None, None, None]
                * g.w.widths[None, None, :, None, None]
                * g.mu.widths[None, None, None, :, None]
                * g.phi.widths[None, None, None, None, :]
            )
        return (
            g.x.widths[:, None, None]
            * g.w.widths[None, :, None]
            * g.mu.widths[None, None, :]
        )

    def l2_norm(self) -> float:
        """L2 norm of the reconstructed polynomial over the whole domain."""
        v = self.cell_measures()
        c = self.interior
        acc = c[0] ** 2
        for j in range(1, c.shape[0]):
            acc = acc + c[j] ** 2 / 3.0
        return float(np.sqrt(np.sum(v * acc)))

    def total_mass(self) -> float:
        """Integral of the reconstruction (linear terms have zero cell mean)."""
        return float(np.sum(self.cell_measures() * self.interior[0]))

    def evaluate(self, point, side: str = "upper") -> float:
        """Point value of the reconstruction.

        At an interior face the containing cell is ambiguous; ``side``
        selects the trace: "upper" takes the cell above/right of the face,
        "lower" the one below/left.
        """
        g = self.grid
        axes = (g.x, g.y, g.w, g.mu, g.phi) if g.is_2d else (g.x, g.w, g.mu)
        if len(point) != len(axes):
            raise ValueError(f"expected {len(axes)} coordinates, got {len(point)}")
        idx = []
        xi = []
        for u, ax in zip(point, axes):
            i = ax.cell_of(float(u))
            if side == "lower" and i > 0 and u == ax.edges[i]:
                i -= 1
            idx.append(i)
            xi.append(2.0 * (u - ax.centers[i]) / ax.widths[i])
        c = self.interior[(slice(None), *idx)]
        val = c[0]
        for j, x in enumerate(xi):
            val += c[1 + j] * x
        return float(val)


def _axis_quad(axis: Axis, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = axis.centers[:, None] + 0.5 * axis.widths[:, None] * x[None, :]
    weights = 0.5 * axis.widths[:, None] * w[None, :]
    xi = x[None, :] * np.ones((axis.n, 1))
    return nodes, weights, xi


def project(f, grid: PhaseGrid, gl_order: int = 4) -> DGField:
    """L2 projection of a callable onto the piecewise-linear space.

    Quadrature is Gauss-Legendre of ``gl_order`` points per axis, exact for
    the basis against smooth integrands.  Intended for analysis-scale grids
    and smooth functions; the production initial state uses closed-form
    energy moments instead.
    """
    field = DGField.zeros(grid)
    g = grid
    if g.is_2d:
        axs = (g.x, g.y, g.w, g.mu, g.phi)
        xn, xw, xxi = zip(*(_axis_quad(a, gl_order) for a in axs))
        pts = np.meshgrid(*[n.ravel() for n in xn], indexing="ij", sparse=True)
        vals = f(*pts)
        q = gl_order
        shp = (g.x.n, q, g.y.n, q, g.w.n, q, g.mu.n, q, g.phi.n, q)
        vals = np.broadcast_to(vals, tuple(n.size for n in (pts[0], pts[1], pts[2], pts[3], pts[4]))).reshape(shp)
        wts = [w.reshape(a.n, q) for w, a in zip(xw, axs)]
        xis = [x.reshape(a.n, q) for x, a in zip(xxi, axs)]
        meas = np.einsum("ia,jb,kc,md,ne->ijkmn", *wts)
        base = np.einsum("iajbkcmdne,ia,jb,kc,md,ne->ijkmn", vals, *wts)
        out = [base / meas]
        for ax_pos in range(5):
            sel = [w for w in wts]
            sel[ax_pos] = wts[ax_pos] * xis[ax_pos]
            mom = np.einsum("iajbkcmdne,ia,jb,kc,md,ne->ijkmn", vals, *sel)
            out.append(3.0 * mom / meas)
        field.interior[0] = out[0]
        for j in range(5):
            field.interior[1 + j] = out[1 + j]
    else:
        axs = (g.x, g.w, g.mu)
        xn, xw, xxi = zip(*(_axis_quad(a, gl_order) for a in axs))
        pts = np.meshgrid(*[n.ravel() for n in xn], indexing="ij", sparse=True)
        vals = f(*pts)
        q = gl_order
        shp = (g.x.n, q, g.w.n, q, g.mu.n, q)
        vals = np.broadcast_to(vals, (g.x.n * q, g.w.n * q, g.mu.n * q)).reshape(shp)
        wts = [w.reshape(a.n, q) for w, a in zip(xw, axs)]
        xis = [x.reshape(a.n, q) for x, a in zip(xxi, axs)]
        meas = np.einsum("ia,kc,md->ikm", *wts)
        base = np.einsum("iakcmd,ia,kc,md->ikm", vals, *wts)
        field.interior[0] = base / meas
        for ax_pos in range(3):
            sel = list(wts)
            sel[ax_pos] = wts[ax_pos] * xis[ax_pos]
            mom = np.einsum("iakcmd,ia,kc,md->ikm", vals, *sel)
            field.interior[1 + ax_pos] = 3.0 * mom / meas
    return field


# ---------------------------------------------------------------------------
# checkpoint format
# ---------------------------------------------------------------------------
#
# Byte layout (little endian):
#   magic   4s   = b"BDCK"
#   version u32  = 1
#   kind    u32  (1 = diode, 2 = mosfet)
#   time    f64
#   nconst  u32, then nconst f64 constants in ScaledConstants field order
#   naxes   u32, then per axis: code u32 (0 x, 1 y, 2 w, 3 mu, 4 phi,
#           5 oxide_y), n_edges u64, edges f64[n_edges]
#   ncomp   u32, ndim u32, dims u64[ndim]  (interior coefficient shape)
#   data    f64[ncomp * prod(dims)] C-order, components in declared order

_MAGIC = b"BDCK"
_AXIS_CODES = {"x": 0, "y": 1, "w": 2, "mu": 3, "phi": 4, "oxide_y": 5}


def write_checkpoint(path, field: DGField, const: ScaledConstants, time: float) -> None:
    g = field.grid
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sII", _MAGIC, 1, 2 if g.is_2d else 1))
        fh.write(struct.pack("<d", float(time)))
        cvals = [v for _, v in const.header_items()]
        fh.write(struct.pack("<I", len(cvals)))
        fh.write(np.asarray(cvals, dtype="<f8").tobytes())
        axes = [(name, getattr(g, name)) for name in _AXIS_CODES if getattr(g, name, None) is not None]
        fh.write(struct.pack("<I", len(axes)))
        for name, ax in axes:
            fh.write(struct.pack("<IQ", _AXIS_CODES[name], ax.edges.size))
            fh.write(ax.edges.astype("<f8").tobytes())
        interior = np.ascontiguousarray(field.interior)
        fh.write(struct.pack("<II", interior.shape[0], interior.ndim - 1))
        fh.write(struct.pack(f"<{interior.ndim - 1}Q", *interior.shape[1:]))
        fh.write(interior.astype("<f8").tobytes())


def read_checkpoint(path) -> tuple[DGField, ScaledConstants, float]:
    from .constants import ScaledConstants as SC

    with open(path, "rb") as fh:
        magic, version, kind_code = struct.unpack("<4sII", fh.read(12))
        if magic != _MAGIC:
            raise ValueError("not a checkpoint file")
        if version != 1:
            raise ValueError(f"unsupported checkpoint version {version}")
        (time,) = struct.unpack("<d", fh.read(8))
        (nconst,) = struct.unpack("<I", fh.read(4))
        cvals = np.frombuffer(fh.read(8 * nconst), dtype="<f8")
        import dataclasses

        names = [f.name for f in dataclasses.fields(SC)]
        const = SC(**dict(zip(names, cvals)))
        (naxes,) = struct.unpack("<I", fh.read(4))
        axes = {}
        code_names = {v: k for k, v in _AXIS_CODES.items()}
        for _ in range(naxes):
            code, n_edges = struct.unpack("<IQ", fh.read(12))
            edges = np.frombuffer(fh.read(8 * n_edges), dtype="<f8")
            axes[code_names[code]] = Axis(edges.copy())
        grid = PhaseGrid(kind="mosfet" if kind_code == 2 else "diode", **axes)
        ncomp, ndim = struct.unpack("<II", fh.read(8))
        dims = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim))
        data = np.frombuffer(fh.read(8 * ncomp * int(np.prod(dims))), dtype="<f8")
        field = DGField.zeros(grid)
        field.interior[...] = data.reshape((ncomp, *dims))
    return field, const, float(time)

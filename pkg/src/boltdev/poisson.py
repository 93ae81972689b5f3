"""LDG solvers for the dimensionless Poisson equation.

The second-order equation is rewritten as a first-order system in the
potential and its gradient components; both are approximated by piecewise
linears.  On interior faces the potential trace is taken from the lower
side and the gradient flux from the upper side minus the potential jump,
the alternating choice that makes the scheme well posed with a unit jump
coefficient.  At Dirichlet faces the potential trace becomes the boundary
value and the gradient flux switches to the interior side (the "flip");
at Neumann faces the potential trace is the interior one and the gradient
flux is the prescribed (here zero) boundary flux.

The system matrix depends only on the mesh, the dielectric layout and the
boundary kinds, so it is factorized once and reused for every right-hand
side during time stepping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import ScaledConstants
from .mesh import Axis

__all__ = [
    "PoissonBC1D",
    "EdgeBC",
    "PoissonBC2D",
    "PoissonSolution1D",
    "PoissonSolution2D",
    "LDGPoisson1D",
    "LDGPoisson2D",
    "solve_poisson_1d",
    "solve_poisson_2d",
    "dirichlet_edge",
    "neumann_edge",
    "edge_from_callable",
]

DIRICHLET = 1
NEUMANN = 0


@dataclass(frozen=True)
class PoissonBC1D:
    kind_lo: str = "dirichlet"
    value_lo: float = 0.0
    kind_hi: str = "dirichlet"
    value_hi: float = 0.0

    def __post_init__(self):
        for k in (self.kind_lo, self.kind_hi):
            if k not in ("dirichlet", "neumann"):
                raise ValueError(f"unknown boundary kind {k!r}")
        if self.kind_lo == "neumann" and self.kind_hi == "neumann":
            raise ValueError("all-Neumann Poisson problem is singular")


@dataclass(frozen=True)
class PoissonSolution1D:
    psi: np.ndarray  # (Nx, 2) mean and xi_x coefficient
    q: np.ndarray  # (Nx, 2) gradient dPsi/dx
    c_v: float

    @property
    def e_cell(self) -> np.ndarray:
        """Cell-mean field E = -c_v dPsi/dx used by transport."""
        return -self.c_v * self.q[:, 0]

    @property
    def e_coeff(self) -> np.ndarray:
        return -self.c_v * self.q


class LDGPoisson1D:
    def __init__(self, x_axis: Axis, eps_r: float, bc: PoissonBC1D, c_v: float):
        self.x_axis = x_axis
        self.eps_r = float(eps_r)
        self.bc = bc
        self.c_v = float(c_v)
        n = x_axis.n
        dx = x_axis.widths
        eps = self.eps_r
        rows, cols, vals = [], [], []
        base = np.zeros(4 * n)

        def put(r, c, v):
            rows.append(r)
            cols.append(c)
            vals.append(v)

        A = lambda i: 4 * i + 0  # psi mean
        B = lambda i: 4 * i + 1  # psi xi
        C = lambda i: 4 * i + 2  # q mean
        D = lambda i: 4 * i + 3  # q xi

        for i in range(n):
            put(4 * i + 0, C(i), dx[i])
            put(4 * i + 1, D(i), dx[i] / 3.0)
            put(4 * i + 1, A(i), 2.0)
            put(4 * i + 3, C(i), -2.0 * eps)

        # psi-hat contributions: interior face f=i+1/2 takes the trace from cell i
        def add_psihat(face, r, sign):
            # face index 0..n; sign multiplies the flux term in row r
            if face == 0:
                if self.bc.kind_lo == "dirichlet":
                    base[r] -= sign * self.bc.value_lo
                else:  # flipped: interior trace of cell 0
                    put(r, A(0), sign)
                    put(r, B(0), -sign)
            elif face == n:
                if self.bc.kind_hi == "dirichlet":
                    base[r] -= sign * self.bc.value_hi
                else:
                    put(r, A(n - 1), sign)
                    put(r, B(n - 1), sign)
            else:
                put(r, A(face - 1), sign)
                put(r, B(face - 1), sign)

        # q-hat contributions for row r with multiplier sign
        def add_qhat(face, r, sign):
            if face == 0:
                if self.bc.kind_lo == "dirichlet":
                    put(r, C(0), sign * eps)
                    put(r, D(0), -sign * eps)
                    put(r, A(0), -sign)
                    put(r, B(0), sign)
                    base[r] -= sign * self.bc.value_lo
                else:  # prescribed flux (homogeneous: value is the flux)
                    base[r] -= sign * self.bc.value_lo
            elif face == n:
                if self.bc.kind_hi == "dirichlet":
                    put(r, C(n - 1), sign * eps)
                    put(r, D(n - 1), sign * eps)
                    put(r, A(n - 1), sign)
                    put(r, B(n - 1), sign)
                    base[r] += sign * self.bc.value_hi  # flux carries -[psi] = psi^- - g
                else:
                    base[r] -= sign * self.bc.value_hi
            else:
                i = face - 1  # lower cell
                put(r, C(i + 1), sign * eps)
                put(r, D(i + 1), -sign * eps)
                put(r, A(i + 1), -sign)
                put(r, B(i + 1), sign)
                put(r, A(i), sign)
                put(r, B(i), sign)

        for i in range(n):
            add_psihat(i + 1, 4 * i + 0, -1.0)
            add_psihat(i, 4 * i + 0, +1.0)
            add_psihat(i + 1, 4 * i + 1, -1.0)
            add_psihat(i, 4 * i + 1, -1.0)
            add_qhat(i + 1, 4 * i + 2, +1.0)
            add_qhat(i, 4 * i + 2, -1.0)
            add_qhat(i + 1, 4 * i + 3, +1.0)
            add_qhat(i, 4 * i + 3, +1.0)

        mat = sp.coo_matrix((vals, (rows, cols)), shape=(4 * n, 4 * n)).tocsc()
        self.matrix = mat
        self._lu = spla.splu(mat)
        self._base_rhs = base

    def solve(self, r_t: np.ndarray, r_x: np.ndarray) -> PoissonSolution1D:
        """Solve with the P1 right-hand side R given per cell (mean, xi)."""
        n = self.x_axis.n
        dx = self.x_axis.widths
        rhs = self._base_rhs.copy()
        rhs[2::4] += dx * np.asarray(r_t)
        rhs[3::4] += dx / 3.0 * np.asarray(r_x)
        u = self._lu.solve(rhs)
        u = u.reshape(n, 4)
        return PoissonSolution1D(psi=u[:, 0:2].copy(), q=u[:, 2:4].copy(), c_v=self.c_v)


def solve_poisson_1d(
    rho_t: np.ndarray,
    rho_x: np.ndarray,
    nd_t: np.ndarray,
    nd_x: np.ndarray,
    bc: PoissonBC1D,
    x_axis: Axis,
    const: ScaledConstants,
    eps_r: Optional[float] = None,
) -> PoissonSolution1D:
    """One-shot solve of eps_r Psi'' = c_p (rho - N_D) with E = -c_v Psi'."""
    solver = LDGPoisson1D(x_axis, const.eps_r_si if eps_r is None else eps_r, bc, const.c_v)
    r_t = const.c_p * (np.asarray(rho_t) - np.asarray(nd_t))
    r_x = const.c_p * (np.asarray(rho_x) - np.asarray(nd_x))
    return solver.solve(r_t, r_x)


# ---------------------------------------------------------------------------
# 2D solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeBC:
    """Per-face boundary data along one domain edge.

    ``g0``/``g1`` are the raw face moments of the boundary datum against the
    face trace basis {1, xi_tangential}: for Dirichlet faces the moments of
    the prescribed potential, for Neumann faces of the prescribed normal
    flux of eps_r grad Psi (zero for the homogeneous condition).
    """

    kind: np.ndarray  # (nfaces,) DIRICHLET or NEUMANN
    g0: np.ndarray
    g1: np.ndarray


def dirichlet_edge(axis: Axis, value: float) -> EdgeBC:
    n = axis.n
    return EdgeBC(
        kind=np.full(n, DIRICHLET, dtype=np.int64),
        g0=value * axis.widths.copy(),
        g1=np.zeros(n),
    )


def neumann_edge(axis: Axis, flux: float = 0.0) -> EdgeBC:
    n = axis.n
    return EdgeBC(
        kind=np.full(n, NEUMANN, dtype=np.int64),
        g0=flux * axis.widths.copy(),
        g1=np.zeros(n),
    )


def edge_from_callable(axis: Axis, g: Callable, kind: int = DIRICHLET, order: int = 4) -> EdgeBC:
    """Face moments of a boundary function along the edge coordinate."""
    gx, gw = np.polynomial.legendre.leggauss(order)
    nodes = axis.centers[:, None] + 0.5 * axis.widths[:, None] * gx[None, :]
    vals = np.asarray(g(nodes), dtype=np.float64)
    vals = np.broadcast_to(vals, nodes.shape)
    g0 = 0.5 * axis.widths * np.sum(gw[None, :] * vals, axis=1)
    g1 = 0.5 * axis.widths * np.sum(gw[None, :] * gx[None, :] * vals, axis=1)
    return EdgeBC(kind=np.full(axis.n, kind, dtype=np.int64), g0=g0, g1=g1)


@dataclass(frozen=True)
class PoissonBC2D:
    left: EdgeBC
    right: EdgeBC
    bottom: EdgeBC
    top: EdgeBC

    def has_dirichlet(self) -> bool:
        return any(
            np.any(e.kind == DIRICHLET) for e in (self.left, self.right, self.bottom, self.top)
        )


@dataclass(frozen=True)
class PoissonSolution2D:
    psi: np.ndarray  # (Nx, Nyp, 3): mean, xi_x, xi_y
    q: np.ndarray  # dPsi/dx coefficients
    s: np.ndarray  # dPsi/dy coefficients
    c_v: float
    n_y_transport: int  # rows visible to the kinetic solver (silicon)

    @property
    def ex_cell(self) -> np.ndarray:
        return -self.c_v * self.q[:, : self.n_y_transport, 0]

    @property
    def ey_cell(self) -> np.ndarray:
        return -self.c_v * self.s[:, : self.n_y_transport, 0]


class LDGPoisson2D:
    def __init__(
        self,
        x_axis: Axis,
        y_axis: Axis,
        eps_cells: np.ndarray,  # (Nx, Ny)
        bc: PoissonBC2D,
        c_v: float,
        n_y_transport: Optional[int] = None,
    ):
        nx, ny = x_axis.n, y_axis.n
        eps_cells = np.asarray(eps_cells, dtype=np.float64)
        if eps_cells.shape != (nx, ny):
            raise ValueError(f"eps map shape {eps_cells.shape} does not match grid ({nx}, {ny})")
        for edge, n_need in (("left", ny), ("right", ny), ("bottom", nx), ("top", nx)):
            e = getattr(bc, edge)
            if e.kind.size != n_need:
                raise ValueError(f"{edge} edge BC has {e.kind.size} faces, grid wants {n_need}")
        if not bc.has_dirichlet():
            raise ValueError("all-Neumann Poisson problem is singular")
        self.x_axis, self.y_axis = x_axis, y_axis
        self.eps = eps_cells
        self.bc = bc
        self.c_v = float(c_v)
        self.n_y_transport = ny if n_y_transport is None else int(n_y_transport)

        dx, dy = x_axis.widths, y_axis.widths
        nun = 9 * nx * ny
        rows, cols, vals = [], [], []
        base = np.zeros(nun)

        def uidx(i, j, c):
            return 9 * (i * ny + j) + c

        def put(r, c, v):
            if r is not None and v != 0.0:
                rows.append(r)
                cols.append(c)
                vals.append(v)

        def add_base(r, v):
            if r is not None and v != 0.0:
                base[r] += v

        # local unknown codes: 0..2 psi(T,X,Y), 3..5 q, 6..8 s
        for i in range(nx):
            for j in range(ny):
                area = dx[i] * dy[j]
                r0 = uidx(i, j, 0)
                # mass blocks of Eq1 (q) and Eq2 (s), volume terms of Eq3
                put(r0 + 0, uidx(i, j, 3), area)
                put(r0 + 1, uidx(i, j, 4), area / 3.0)
                put(r0 + 1, uidx(i, j, 0), 2.0 * dy[j])
                put(r0 + 2, uidx(i, j, 5), area / 3.0)
                put(r0 + 3, uidx(i, j, 6), area)
                put(r0 + 4, uidx(i, j, 7), area / 3.0)
                put(r0 + 5, uidx(i, j, 8), area / 3.0)
                put(r0 + 5, uidx(i, j, 0), 2.0 * dx[i])
                put(r0 + 7, uidx(i, j, 3), -2.0 * dy[j] * self.eps[i, j])
                put(r0 + 8, uidx(i, j, 6), -2.0 * dx[i] * self.eps[i, j])

        # --- x-direction faces -------------------------------------------
        # psi-hat moments enter Eq1 rows, q-hat moments enter Eq3 rows.
        def psihat_x(i_face, j, row0, row1, sign):
            """Add sign * (moment0 into row0, moment1 into row1) of psi-hat."""
            if i_face == 0:
                e = bc.left
                if e.kind[j] == DIRICHLET:
                    add_base(row0, -(sign * e.g0[j]))
                    add_base(row1, -(sign * e.g1[j]))
                else:  # flipped to the interior trace of cell (0, j)
                    put(row0, uidx(0, j, 0), sign * dy[j])
                    put(row0, uidx(0, j, 1), -sign * dy[j])
                    put(row1, uidx(0, j, 2), sign * dy[j] / 3.0)
            elif i_face == nx:
                e = bc.right
                if e.kind[j] == DIRICHLET:
                    add_base(row0, -(sign * e.g0[j]))
                    add_base(row1, -(sign * e.g1[j]))
                else:
                    put(row0, uidx(nx - 1, j, 0), sign * dy[j])
                    put(row0, uidx(nx - 1, j, 1), sign * dy[j])
                    put(row1, uidx(nx - 1, j, 2), sign * dy[j] / 3.0)
            else:
                i = i_face - 1
                put(row0, uidx(i, j, 0), sign * dy[j])
                put(row0, uidx(i, j, 1), sign * dy[j])
                put(row1, uidx(i, j, 2), sign * dy[j] / 3.0)

        def qhat_x(i_face, j, row0, row1, sign):
            if i_face == 0:
                e = bc.left
                if e.kind[j] == DIRICHLET:
                    put(row0, uidx(0, j, 3), sign * dy[j] * self.eps[0, j])
                    put(row0, uidx(0, j, 4), -sign * dy[j] * self.eps[0, j])
                    put(row0, uidx(0, j, 0), -sign * dy[j])
                    put(row0, uidx(0, j, 1), sign * dy[j])
                    add_base(row0, -(sign * e.g0[j]))
                    put(row1, uidx(0, j, 5), sign * dy[j] / 3.0 * self.eps[0, j])
                    put(row1, uidx(0, j, 2), -sign * dy[j] / 3.0)
                    add_base(row1, -(sign * e.g1[j]))
                else:
                    add_base(row0, -(sign * e.g0[j]))
                    add_base(row1, -(sign * e.g1[j]))
            elif i_face == nx:
                e = bc.right
                if e.kind[j] == DIRICHLET:
                    put(row0, uidx(nx - 1, j, 3), sign * dy[j] * self.eps[nx - 1, j])
                    put(row0, uidx(nx - 1, j, 4), sign * dy[j] * self.eps[nx - 1, j])
                    put(row0, uidx(nx - 1, j, 0), sign * dy[j])
                    put(row0, uidx(nx - 1, j, 1), sign * dy[j])
                    add_base(row0, sign * e.g0[j])  # flux carries -[psi] = psi^- - g
                    put(row1, uidx(nx - 1, j, 5), sign * dy[j] / 3.0 * self.eps[nx - 1, j])
                    put(row1, uidx(nx - 1, j, 2), sign * dy[j] / 3.0)
                    add_base(row1, sign * e.g1[j])
                else:
                    add_base(row0, -(sign * e.g0[j]))
                    add_base(row1, -(sign * e.g1[j]))
            else:
                i = i_face - 1
                epsr = self.eps[i + 1, j]
                put(row0, uidx(i + 1, j, 3), sign * dy[j] * epsr)
                put(row0, uidx(i + 1, j, 4), -sign * dy[j] * epsr)
                put(row0, uidx(i + 1, j, 0), -sign * dy[j])
                put(row0, uidx(i + 1, j, 1), sign * dy[j])
                put(row0, uidx(i, j, 0), sign * dy[j])
                put(row0, uidx(i, j, 1), sign * dy[j])
                put(row1, uidx(i + 1, j, 5), sign * dy[j] / 3.0 * epsr)
                put(row1, uidx(i + 1, j, 2), -sign * dy[j] / 3.0)
                put(row1, uidx(i, j, 2), sign * dy[j] / 3.0)

        # --- y-direction faces -------------------------------------------
        def psitilde_y(i, j_face, row0, row1, sign):
            if j_face == 0:
                e = bc.bottom
                if e.kind[i] == DIRICHLET:
                    add_base(row0, -(sign * e.g0[i]))
                    add_base(row1, -(sign * e.g1[i]))
                else:
                    put(row0, uidx(i, 0, 0), sign * dx[i])
                    put(row0, uidx(i, 0, 2), -sign * dx[i])
                    put(row1, uidx(i, 0, 1), sign * dx[i] / 3.0)
            elif j_face == ny:
                e = bc.top
                if e.kind[i] == DIRICHLET:
                    add_base(row0, -(sign * e.g0[i]))
                    add_base(row1, -(sign * e.g1[i]))
                else:
                    put(row0, uidx(i, ny - 1, 0), sign * dx[i])
                    put(row0, uidx(i, ny - 1, 2), sign * dx[i])
                    put(row1, uidx(i, ny - 1, 1), sign * dx[i] / 3.0)
            else:
                j = j_face - 1
                put(row0, uidx(i, j, 0), sign * dx[i])
                put(row0, uidx(i, j, 2), sign * dx[i])
                put(row1, uidx(i, j, 1), sign * dx[i] / 3.0)

        def stilde_y(i, j_face, row0, row1, sign):
            if j_face == 0:
                e = bc.bottom
                if e.kind[i] == DIRICHLET:
                    put(row0, uidx(i, 0, 6), sign * dx[i] * self.eps[i, 0])
                    put(row0, uidx(i, 0, 8), -sign * dx[i] * self.eps[i, 0])
                    put(row0, uidx(i, 0, 0), -sign * dx[i])
                    put(row0, uidx(i, 0, 2), sign * dx[i])
                    add_base(row0, -(sign * e.g0[i]))
                    put(row1, uidx(i, 0, 7), sign * dx[i] / 3.0 * self.eps[i, 0])
                    put(row1, uidx(i, 0, 1), -sign * dx[i] / 3.0)
                    add_base(row1, -(sign * e.g1[i]))
                else:
                    add_base(row0, -(sign * e.g0[i]))
                    add_base(row1, -(sign * e.g1[i]))
            elif j_face == ny:
                e = bc.top
                if e.kind[i] == DIRICHLET:
                    put(row0, uidx(i, ny - 1, 6), sign * dx[i] * self.eps[i, ny - 1])
                    put(row0, uidx(i, ny - 1, 8), sign * dx[i] * self.eps[i, ny - 1])
                    put(row0, uidx(i, ny - 1, 0), sign * dx[i])
                    put(row0, uidx(i, ny - 1, 2), sign * dx[i])
                    add_base(row0, sign * e.g0[i])  # flux carries -[psi] = psi^- - g
                    put(row1, uidx(i, ny - 1, 7), sign * dx[i] / 3.0 * self.eps[i, ny - 1])
                    put(row1, uidx(i, ny - 1, 1), sign * dx[i] / 3.0)
                    add_base(row1, sign * e.g1[i])
                else:
                    add_base(row0, -(sign * e.g0[i]))
                    add_base(row1, -(sign * e.g1[i]))
            else:
                j = j_face - 1
                epst = self.eps[i, j + 1]
                put(row0, uidx(i, j + 1, 6), sign * dx[i] * epst)
                put(row0, uidx(i, j + 1, 8), -sign * dx[i] * epst)
                put(row0, uidx(i, j + 1, 0), -sign * dx[i])
                put(row0, uidx(i, j + 1, 2), sign * dx[i])
                put(row0, uidx(i, j, 0), sign * dx[i])
                put(row0, uidx(i, j, 2), sign * dx[i])
                put(row1, uidx(i, j + 1, 7), sign * dx[i] / 3.0 * epst)
                put(row1, uidx(i, j + 1, 1), -sign * dx[i] / 3.0)
                put(row1, uidx(i, j, 1), sign * dx[i] / 3.0)

        for i in range(nx):
            for j in range(ny):
                r0 = uidx(i, j, 0)
                # Eq1: psi-hat via x faces; moment0 rows (v=1, v=xi_x), moment1 row (v=xi_y)
                psihat_x(i + 1, j, r0 + 0, r0 + 2, -1.0)
                psihat_x(i, j, r0 + 0, r0 + 2, +1.0)
                psihat_x(i + 1, j, r0 + 1, None, -1.0)
                psihat_x(i, j, r0 + 1, None, -1.0)
                # Eq2: psi-tilde via y faces
                psitilde_y(i, j + 1, r0 + 3, r0 + 4, -1.0)
                psitilde_y(i, j, r0 + 3, r0 + 4, +1.0)
                psitilde_y(i, j + 1, r0 + 5, None, -1.0)
                psitilde_y(i, j, r0 + 5, None, -1.0)
                # Eq3: q-hat via x faces, s-tilde via y faces
                qhat_x(i + 1, j, r0 + 6, r0 + 8, +1.0)
                qhat_x(i, j, r0 + 6, r0 + 8, -1.0)
                qhat_x(i + 1, j, r0 + 7, None, +1.0)
                qhat_x(i, j, r0 + 7, None, +1.0)
                stilde_y(i, j + 1, r0 + 6, r0 + 7, +1.0)
                stilde_y(i, j, r0 + 6, r0 + 7, -1.0)
                stilde_y(i, j + 1, r0 + 8, None, +1.0)
                stilde_y(i, j, r0 + 8, None, +1.0)

        mat = sp.coo_matrix((vals, (rows, cols)), shape=(nun, nun))
        self.matrix = mat.tocsc()
        self._lu = spla.splu(self.matrix)
        self._base_rhs = base

    def solve(self, r_t, r_x, r_y) -> PoissonSolution2D:
        nx, ny = self.x_axis.n, self.y_axis.n
        area = np.outer(self.x_axis.widths, self.y_axis.widths)
        rhs = self._base_rhs.copy()
        rhs = rhs.reshape(nx, ny, 9)
        rhs[:, :, 6] += area * np.asarray(r_t)
        rhs[:, :, 7] += area / 3.0 * np.asarray(r_x)
        rhs[:, :, 8] += area / 3.0 * np.asarray(r_y)
        u = self._lu.solve(rhs.reshape(-1)).reshape(nx, ny, 9)
        return PoissonSolution2D(
            psi=u[:, :, 0:3].copy(),
            q=u[:, :, 3:6].copy(),
            s=u[:, :, 6:9].copy(),
            c_v=self.c_v,
            n_y_transport=self.n_y_transport,
        )



def solve_poisson_2d(
    rho_t,
    rho_x,
    rho_y,
    nd_t,
    nd_x,
    bc: PoissonBC2D,
    x_axis: Axis,
    y_axis: Axis,
    eps_cells: np.ndarray,
    const: ScaledConstants,
    n_y_transport: Optional[int] = None,
) -> PoissonSolution2D:
    """One-shot 2D solve; rho arrays cover the full Poisson grid (zero on oxide)."""
    solver = LDGPoisson2D(x_axis, y_axis, eps_cells, bc, const.c_v, n_y_transport)
    r_t = const.c_p * (np.asarray(rho_t) - np.asarray(nd_t))
    r_x = const.c_p * (np.asarray(rho_x) - np.asarray(nd_x))
    r_y = const.c_p * np.asarray(rho_y)
    return solver.solve(r_t, r_x, r_y)


# ---------------------------------------------------------------------------
# manufactured-solution verification
# ---------------------------------------------------------------------------


def _project_p1_1d(axis: Axis, f, order: int = 6):
    gx, gw = np.polynomial.legendre.leggauss(order)
    nodes = axis.centers[:, None] + 0.5 * axis.widths[:, None] * gx[None, :]
    vals = f(nodes)
    mean = 0.5 * np.sum(gw * vals, axis=1)
    slope = 1.5 * np.sum(gw * gx * vals, axis=1)
    return mean, slope


def _l2_error_1d(axis: Axis, coeffs: np.ndarray, exact, order: int = 6) -> float:
    gx, gw = np.polynomial.legendre.leggauss(order)
    nodes = axis.centers[:, None] + 0.5 * axis.widths[:, None] * gx[None, :]
    approx = coeffs[:, 0:1] + coeffs[:, 1:2] * gx[None, :]
    diff2 = (approx - exact(nodes)) ** 2
    return float(np.sqrt(np.sum(0.5 * axis.widths[:, None] * gw[None, :] * diff2)))


def manufactured_convergence_1d(cells=(32, 64, 128), eps_r: float = 11.7):
    """L2 errors and observed orders for Psi = sin(pi x) on [0, 1]."""
    exact = lambda x: np.sin(np.pi * x)
    rhs = lambda x: -eps_r * np.pi**2 * np.sin(np.pi * x)
    errs = []
    for n in cells:
        axis = Axis(np.linspace(0.0, 1.0, n + 1))
        solver = LDGPoisson1D(axis, eps_r, PoissonBC1D(), c_v=1.0)
        r_t, r_x = _project_p1_1d(axis, rhs)
        sol = solver.solve(r_t, r_x)
        errs.append(_l2_error_1d(axis, sol.psi, exact))
    orders = [
        float(np.log(errs[i - 1] / errs[i]) / np.log(cells[i] / cells[i - 1]))
        for i in range(1, len(errs))
    ]
    return errs, orders


def _l2_error_2d(xa: Axis, ya: Axis, coeffs: np.ndarray, exact, order: int = 4) -> float:
    gx, gw = np.polynomial.legendre.leggauss(order)
    xn = xa.centers[:, None] + 0.5 * xa.widths[:, None] * gx[None, :]
    yn = ya.centers[:, None] + 0.5 * ya.widths[:, None] * gx[None, :]
    err2 = 0.0
    for i in range(xa.n):
        for j in range(ya.n):
            xg = xn[i][:, None]
            yg = yn[j][None, :]
            approx = coeffs[i, j, 0] + coeffs[i, j, 1] * gx[:, None] + coeffs[i, j, 2] * gx[None, :]
            d2 = (approx - exact(xg, yg)) ** 2
            wgt = np.outer(gw, gw) * 0.25 * xa.widths[i] * ya.widths[j]
            err2 += float(np.sum(wgt * d2))
    return np.sqrt(err2)


def manufactured_convergence_2d(cells=(16, 32, 64), eps_r: float = 11.7):
    """L2 errors and orders for Psi = sin(pi x) sin(pi y) on the unit square."""
    exact = lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)
    errs = []
    for n in cells:
        xa = Axis(np.linspace(0.0, 1.0, n + 1))
        ya = Axis(np.linspace(0.0, 1.0, n + 1))
        bc = PoissonBC2D(
            left=dirichlet_edge(ya, 0.0),
            right=dirichlet_edge(ya, 0.0),
            bottom=dirichlet_edge(xa, 0.0),
            top=dirichlet_edge(xa, 0.0),
        )
        solver = LDGPoisson2D(xa, ya, np.full((n, n), eps_r), bc, c_v=1.0)
        gxq, gwq = np.polynomial.legendre.leggauss(6)
        xn = xa.centers[:, None] + 0.5 * xa.widths[:, None] * gxq[None, :]
        yn = ya.centers[:, None] + 0.5 * ya.widths[:, None] * gxq[None, :]
        f = lambda x, y: -2.0 * eps_r * np.pi**2 * np.sin(np.pi * x) * np.sin(np.pi * y)
        vals = f(xn[:, None, :, None], yn[None, :, None, :])
        r_t = 0.25 * np.einsum("ijab,a,b->ij", vals, gwq, gwq)
        r_x = 0.75 * np.einsum("ijab,a,b->ij", vals * gxq[None, None, :, None], gwq, gwq)
        r_y = 0.75 * np.einsum("ijab,a,b->ij", vals * gxq[None, None, None, :], gwq, gwq)
        sol = solver.solve(r_t, r_x, r_y)
        errs.append(_l2_error_2d(xa, ya, sol.psi, exact))
    orders = [
        float(np.log(errs[i - 1] / errs[i]) / np.log(cells[i] / cells[i - 1]))
        for i in range(1, len(errs))
    ]
    return errs, orders

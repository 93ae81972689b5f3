"""Precomputed energy-cell integrals for collision and streaming terms.

Every w-integral involves the density-of-states weight
``s(w) = sqrt(w(1+a w)) (1+2 a w)`` or the streaming weights
``s1 = sqrt(w(1+a w))/(1+2 a w)`` and ``s2 = 1/sqrt(w(1+a w))``, all of
which are singular or non smooth at w = 0.  The substitution w = r**2
(shifted variants for the w +- gamma pieces) turns each integrand into a
smooth function of r, which fixed-order Gauss-Legendre quadrature then
handles to near machine precision.

mu and phi integrals appearing alongside these are polynomials, square
roots and trig factors with closed-form antiderivatives; they are
evaluated exactly here and never sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .constants import ScaledConstants
from .mesh import Axis, PhaseGrid

__all__ = [
    "s_of_w",
    "s1_of_w",
    "s2_of_w",
    "s_weighted_integral",
    "CollisionTables",
    "StreamingTables",
    "build_collision_tables",
    "build_streaming_tables",
    "maxwellian_cell_moments",
]

DEFAULT_GL_ORDER = 8
_ZERO_SNAP = 1e-300


def s_of_w(w, alpha_k: float):
    """Density-of-states weight; zero wherever the argument is negative."""
    w = np.asarray(w, dtype=np.float64)
    out = np.zeros_like(w)
    pos = w > 0.0
    wp = w[pos]
    out[pos] = np.sqrt(wp * (1.0 + alpha_k * wp)) * (1.0 + 2.0 * alpha_k * wp)
    return out if out.ndim else float(out)


def s1_of_w(w, alpha_k: float):
    w = np.asarray(w, dtype=np.float64)
    return np.sqrt(np.maximum(w, 0.0) * (1.0 + alpha_k * np.maximum(w, 0.0))) / (
        1.0 + 2.0 * alpha_k * w
    )


def s2_of_w(w, alpha_k: float):
    """1/sqrt(w(1+a w)); singular at w = 0, only integrated, never sampled there."""
    w = np.asarray(w, dtype=np.float64)
    return 1.0 / np.sqrt(w * (1.0 + alpha_k * w))


@lru_cache(maxsize=32)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _gl_on(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gl_nodes(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def s_weighted_integral(
    a: float,
    b: float,
    shift: float = 0.0,
    weight: Sequence[float] = (1.0,),
    *,
    alpha_k: float,
    order: int = DEFAULT_GL_ORDER,
) -> float:
    """integral_a^b s(w + shift) * poly(w) dw with s(arg < 0) treated as 0.

    ``weight`` holds polynomial coefficients in w, lowest power first.  The
    integral is computed in r with w + shift = r**2, which removes the
    square-root singularity of s at zero argument.
    """
    if a >= b:
        raise ValueError(f"empty integration interval [{a}, {b}]")
    lo = max(a, -shift)
    if b <= lo:
        return 0.0
    r0 = np.sqrt(lo + shift)
    r1 = np.sqrt(b + shift)
    r, wq = _gl_on(float(r0), float(r1), order)
    u = r * r  # = w + shift >= 0
    w_coord = u - shift
    f = 2.0 * u * np.sqrt(1.0 + alpha_k * u) * (1.0 + 2.0 * alpha_k * u)
    val = float(np.sum(wq * f * npoly.polyval(w_coord, np.asarray(weight, dtype=np.float64))))
    return 0.0 if abs(val) < _ZERO_SNAP else val


def _s1_weighted(a, b, weight, alpha_k, order):
    if b <= a:
        return 0.0
    r, wq = _gl_on(np.sqrt(a), np.sqrt(b), order)
    u = r * r
    f = 2.0 * u * np.sqrt(1.0 + alpha_k * u) / (1.0 + 2.0 * alpha_k * u)
    return float(np.sum(wq * f * npoly.polyval(u, np.asarray(weight, dtype=np.float64))))


def _s2_weighted(a, b, weight, alpha_k, order):
    if b <= a:
        return 0.0
    r, wq = _gl_on(np.sqrt(a), np.sqrt(b), order)
    u = r * r
    f = 2.0 / np.sqrt(1.0 + alpha_k * u)
    return float(np.sum(wq * f * npoly.polyval(u, np.asarray(weight, dtype=np.float64))))


def _xi_poly(center: float, width: float) -> np.ndarray:
    """Coefficients of the cell-local basis 2(w - c)/d as a polynomial in w."""
    return np.array([-2.0 * center / width, 2.0 / width])


def _xi_power(center: float, width: float, q: int) -> np.ndarray:
    p = np.array([1.0])
    for _ in range(q):
        p = npoly.polymul(p, _xi_poly(center, width))
    return p


def maxwellian_cell_moments(
    w_axis: Axis, alpha_k: float, order: int = 16
) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell (integral s e^-w, integral s e^-w xi_w) used by the initial state."""
    n = w_axis.n
    m0 = np.empty(n)
    m1 = np.empty(n)
    for k in range(n):
        a, b = w_axis.edges[k], w_axis.edges[k + 1]
        r, wq = _gl_on(np.sqrt(a), np.sqrt(b), order)
        u = r * r
        f = 2.0 * u * np.sqrt(1.0 + alpha_k * u) * (1.0 + 2.0 * alpha_k * u) * np.exp(-u)
        xi = 2.0 * (u - w_axis.centers[k]) / w_axis.widths[k]
        m0[k] = np.sum(wq * f)
        m1[k] = np.sum(wq * f * xi)
    return m0, m1


# ---------------------------------------------------------------------------
# collision tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CollisionTables:
    """Shifted-energy overlap integrals and loss-frequency moments.

    ``overlap[s, a, k, kp]`` is the weight-a integral over cell k against
    the indicator of cell kp shifted by sigma_values[s]; weights are
    a=0: 1, a=1: xi of the shifted cell kp, a=2: xi of cell k, a=3: their
    product.  ``gain0/gain1/gain2/gain3`` are the same tables combined with
    the per-shift collision strengths, ready for the RHS kernels.
    ``loss[q, k]`` is the q-th xi moment of the loss frequency nu over
    cell k.
    """

    grid_hash: str
    sigma_values: np.ndarray  # (3,) = (-gamma, 0, +gamma)
    sigma_coeffs: np.ndarray  # (3,) = (c_minus, c0, c_plus)
    overlap: np.ndarray  # (3, 4, Nw, Nw)
    loss: np.ndarray  # (3, Nw)
    gain0: np.ndarray
    gain1: np.ndarray
    gain2: np.ndarray
    gain3: np.ndarray

    @property
    def n_w(self) -> int:
        return self.loss.shape[1]

    @property
    def nu_max(self) -> float:
        """Upper bound on the loss frequency via per-cell mean values."""
        return float(np.max(self.loss[0]))


def build_collision_tables(
    grid: PhaseGrid,
    const: ScaledConstants,
    order: int = DEFAULT_GL_ORDER,
) -> CollisionTables:
    wax = grid.w
    nw = wax.n
    gamma = const.gamma
    alpha = const.alpha_k
    sigma_values = np.array([-gamma, 0.0, gamma])
    sigma_coeffs = np.array([const.c_minus, const.c0, const.c_plus])

    overlap = np.zeros((3, 4, nw, nw))
    edges = wax.edges
    centers = wax.centers
    widths = wax.widths
    for s_idx, sigma in enumerate(sigma_values):
        for kp in range(nw):
            # image of cell kp under the shift: w + sigma in cell kp
            img_lo = edges[kp] - sigma
            img_hi = edges[kp + 1] - sigma
            xi_kp = np.array(
                [2.0 * (sigma - centers[kp]) / widths[kp], 2.0 / widths[kp]]
            )
            k_lo = int(np.searchsorted(edges, img_lo, side="right") - 1)
            k_hi = int(np.searchsorted(edges, img_hi, side="left"))
            for k in range(max(k_lo, 0), min(k_hi, nw)):
                a = max(edges[k], img_lo)
                b = min(edges[k + 1], img_hi)
                if b - a <= 1e-15 * max(1.0, abs(b)):
                    continue
                xi_k = _xi_poly(centers[k], widths[k])
                kw = dict(alpha_k=alpha, order=order)
                overlap[s_idx, 0, k, kp] = s_weighted_integral(a, b, 0.0, (1.0,), **kw)
                overlap[s_idx, 1, k, kp] = s_weighted_integral(a, b, 0.0, xi_kp, **kw)
                overlap[s_idx, 2, k, kp] = s_weighted_integral(a, b, 0.0, xi_k, **kw)
                overlap[s_idx, 3, k, kp] = s_weighted_integral(
                    a, b, 0.0, npoly.polymul(xi_kp, xi_k), **kw
                )

    # loss frequency nu(w) = 2 pi [c0 s(w) + c_plus s(w-gamma) + c_minus s(w+gamma)]
    loss = np.zeros((3, nw))
    loss_pieces = ((const.c0, 0.0), (const.c_plus, -gamma), (const.c_minus, gamma))
    for k in range(nw):
        a, b = edges[k], edges[k + 1]
        for q in range(3):
            xi_q = _xi_power(centers[k], widths[k], q)
            loss[q, k] = 2.0 * np.pi * sum(
                c * s_weighted_integral(a, b, shift, xi_q, alpha_k=alpha, order=order)
                for c, shift in loss_pieces
            )

    gains = np.einsum("s,sakl->akl", sigma_coeffs, overlap)
    gains[np.abs(gains) < _ZERO_SNAP] = 0.0
    return CollisionTables(
        grid_hash=grid.grid_hash(),
        sigma_values=sigma_values,
        sigma_coeffs=sigma_coeffs,
        overlap=overlap,
        loss=loss,
        gain0=np.ascontiguousarray(gains[0]),
        gain1=np.ascontiguousarray(gains[1]),
        gain2=np.ascontiguousarray(gains[2]),
        gain3=np.ascontiguousarray(gains[3]),
    )


# ---------------------------------------------------------------------------
# streaming tables
# ---------------------------------------------------------------------------


def _clip_unit(mu):
    return np.clip(mu, -1.0, 1.0)


def _antideriv_sqrt(j: int, mu: np.ndarray) -> np.ndarray:
    """Antiderivative of mu**j * sqrt(1 - mu**2), j = 0..3."""
    mu = _clip_unit(np.asarray(mu, dtype=np.float64))
    t = 1.0 - mu * mu
    root = np.sqrt(t)
    if j == 0:
        return 0.5 * (mu * root + np.arcsin(mu))
    if j == 1:
        return -(t ** 1.5) / 3.0
    if j == 2:
        return (mu * (2.0 * mu * mu - 1.0) * root + np.arcsin(mu)) / 8.0
    if j == 3:
        return (t ** 2.5) / 5.0 - (t ** 1.5) / 3.0
    raise ValueError(j)


def _antideriv_invsqrt(j: int, mu: np.ndarray) -> np.ndarray:
    """Antiderivative of mu**j / sqrt(1 - mu**2), j = 0..2 (finite at +-1)."""
    mu = _clip_unit(np.asarray(mu, dtype=np.float64))
    root = np.sqrt(1.0 - mu * mu)
    if j == 0:
        return np.arcsin(mu)
    if j == 1:
        return -root
    if j == 2:
        return 0.5 * (np.arcsin(mu) - mu * root)
    raise ValueError(j)


def _antideriv_cos(j: int, p: np.ndarray) -> np.ndarray:
    if j == 0:
        return np.sin(p)
    if j == 1:
        return np.cos(p) + p * np.sin(p)
    if j == 2:
        return 2.0 * p * np.cos(p) + (p * p - 2.0) * np.sin(p)
    raise ValueError(j)


def _antideriv_sin(j: int, p: np.ndarray) -> np.ndarray:
    if j == 0:
        return -np.cos(p)
    if j == 1:
        return np.sin(p) - p * np.cos(p)
    if j == 2:
        return 2.0 * p * np.sin(p) - (p * p - 2.0) * np.cos(p)
    raise ValueError(j)


def _xi_coeff_rows(axis: Axis) -> list[np.ndarray]:
    """Per-cell coefficient rows of xi**q in the raw coordinate, q = 0, 1, 2."""
    a = 2.0 / axis.widths
    b = -2.0 * axis.centers / axis.widths
    zero = np.zeros(axis.n)
    one = np.ones(axis.n)
    return [
        np.stack([one, zero, zero], axis=1),
        np.stack([b, a, zero], axis=1),
        np.stack([b * b, 2.0 * a * b, a * a], axis=1),
    ]


def _family_moments(axis: Axis, antideriv, extra_power: int = 0) -> np.ndarray:
    """(3, n) moments of f(u) * xi**q where antideriv(j, .) integrates u**j f(u).

    ``extra_power`` shifts the monomial degree (used for u * sqrt(1 - u^2)).
    """
    lo, hi = axis.edges[:-1], axis.edges[1:]
    base = np.stack(
        [antideriv(j, hi) - antideriv(j, lo) for j in range(3 + extra_power)]
    )  # (3+extra, n)
    rows = _xi_coeff_rows(axis)
    out = np.empty((3, axis.n))
    for q in range(3):
        acc = np.zeros(axis.n)
        for j in range(3):
            acc += rows[q][:, j] * base[j + extra_power]
        out[q] = acc
    return out


def _poly_moments(axis: Axis, f_coeffs: Sequence[float]) -> np.ndarray:
    """(3, n) exact moments of poly(u) * xi**q over each cell."""
    f = np.asarray(f_coeffs, dtype=np.float64)
    lo, hi = axis.edges[:-1], axis.edges[1:]
    rows = _xi_coeff_rows(axis)
    out = np.empty((3, axis.n))
    for q in range(3):
        acc = np.zeros(axis.n)
        for j in range(3):
            anti = npoly.polyint(npoly.polymul(f, [0.0] * j + [1.0]))
            acc += rows[q][:, j] * (npoly.polyval(hi, anti) - npoly.polyval(lo, anti))
        out[q] = acc
    return out


@dataclass(frozen=True)
class StreamingTables:
    """Per-axis moment tables feeding the transport RHS and the moments.

    w tables: ``s1m[q, k]`` and ``s2m[q, k]`` are the xi_w**q moments of the
    streaming weights over cell k, ``s1_face`` holds pointwise s1 at the
    w faces (finite everywhere, zero at w = 0).  mu tables hold the exact
    xi_mu**q moments of mu, sqrt(1-mu^2), (1-mu^2), mu*sqrt(1-mu^2) and
    1/sqrt(1-mu^2); phi tables the moments of 1, cos and sin.
    """

    grid_hash: str
    s1m: np.ndarray
    s2m: np.ndarray
    s1_face: np.ndarray
    mu_m: np.ndarray
    mu_r: np.ndarray
    mu_p: np.ndarray
    mu_q: np.ndarray
    mu_u: np.ndarray
    mu_face_p: np.ndarray
    mu_face_r: np.ndarray
    phi_one: Optional[np.ndarray] = None
    phi_c: Optional[np.ndarray] = None
    phi_s: Optional[np.ndarray] = None
    phi_face_sin: Optional[np.ndarray] = None

    def g1_tables(self, c_x: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """x-momentum weight tables (g1, g1w, g1mu) indexed (k, m)."""
        g1 = c_x * np.outer(self.s1m[0], self.mu_m[0])
        g1w = c_x * np.outer(self.s1m[1], self.mu_m[0])
        g1mu = c_x * np.outer(self.s1m[0], self.mu_m[1])
        return g1, g1w, g1mu

    def g2_tables(self, c_x: float):
        """y-momentum weight tables (g2, g2w, g2mu, g2phi) indexed (k, m, n)."""
        if self.phi_c is None:
            raise ValueError("phi tables absent on a 1D grid")
        g2 = c_x * np.einsum("k,m,n->kmn", self.s1m[0], self.mu_r[0], self.phi_c[0])
        g2w = c_x * np.einsum("k,m,n->kmn", self.s1m[1], self.mu_r[0], self.phi_c[0])
        g2mu = c_x * np.einsum("k,m,n->kmn", self.s1m[0], self.mu_r[1], self.phi_c[0])
        g2phi = c_x * np.einsum("k,m,n->kmn", self.s1m[0], self.mu_r[0], self.phi_c[1])
        return g2, g2w, g2mu, g2phi


def build_streaming_tables(
    grid: PhaseGrid,
    const: ScaledConstants,
    order: int = DEFAULT_GL_ORDER,
) -> StreamingTables:
    alpha = const.alpha_k
    wax = grid.w
    nw = wax.n
    s1m = np.zeros((3, nw))
    s2m = np.zeros((3, nw))
    for k in range(nw):
        a, b = wax.edges[k], wax.edges[k + 1]
        for q in range(3):
            xi_q = _xi_power(wax.centers[k], wax.widths[k], q)
            s1m[q, k] = _s1_weighted(a, b, xi_q, alpha, order)
            s2m[q, k] = _s2_weighted(a, b, xi_q, alpha, order)
    s1_face = s1_of_w(wax.edges, alpha)

    mu_ax = grid.mu
    mu_m = _poly_moments(mu_ax, [0.0, 1.0])
    mu_p = _poly_moments(mu_ax, [1.0, 0.0, -1.0])
    mu_r = _family_moments(mu_ax, _antideriv_sqrt)
    mu_q = _family_moments(mu_ax, _antideriv_sqrt, extra_power=1)
    mu_u = _family_moments(mu_ax, _antideriv_invsqrt)
    mu_face_p = 1.0 - mu_ax.edges ** 2
    mu_face_r = np.sqrt(np.maximum(mu_face_p, 0.0))

    phi_one = phi_c = phi_s = phi_face_sin = None
    if grid.is_2d:
        pax = grid.phi
        phi_one = np.zeros((3, pax.n))
        phi_one[0] = pax.widths
        phi_one[2] = pax.widths / 3.0
        phi_c = _family_moments(pax, _antideriv_cos)
        phi_s = _family_moments(pax, _antideriv_sin)
        phi_face_sin = np.sin(pax.edges)

    return StreamingTables(
        grid_hash=grid.grid_hash(),
        s1m=s1m,
        s2m=s2m,
        s1_face=s1_face,
        mu_m=mu_m,
        mu_r=mu_r,
        mu_p=mu_p,
        mu_q=mu_q,
        mu_u=mu_u,
        mu_face_p=mu_face_p,
        mu_face_r=mu_face_r,
        phi_one=phi_one,
        phi_c=phi_c,
        phi_s=phi_s,
        phi_face_sin=phi_face_sin,
    )

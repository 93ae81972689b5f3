"""Vectorized numpy implementations of the RHS kernels.

Sign conventions: for each face the flux integral against the test-function
trace is accumulated with a minus sign into the cell below/left of the face
and a plus sign into the one above/right, except that test functions which
are odd across the face (the matching xi factor) flip the sign on their
lower side.  Upwind choices depend only on cell-center angles and the
cell-mean field, never on the unknowns.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


# ---------------------------------------------------------------------------
# transport, 1D
# ---------------------------------------------------------------------------


def transport_rhs_1d(
    data, e_cell, dx, dw, s1m, s2m, s1f, mu_m, mu_p, mu_face_p, mu_c, dmu, c_x, c_k, out
):
    nx = e_cell.shape[0]
    T, X, W, M = data[0], data[1], data[2], data[3]  # (Nx+2, Nw, Nm)
    Ti, Xi, Wi, Mi = T[1:-1], X[1:-1], W[1:-1], M[1:-1]
    s1_0 = s1m[0][:, None]
    s1_1 = s1m[1][:, None]
    s1_2 = s1m[2][:, None]
    s2_0 = s2m[0][None, :, None]
    s2_1 = s2m[1][None, :, None]
    s2_2 = s2m[2][None, :, None]
    m0 = mu_m[0][None, :]
    m1 = mu_m[1][None, :]
    m2 = mu_m[2][None, :]

    # x faces: upwind side fixed by the sign of the cell-center mu
    up = (mu_c > 0.0)[None, None, :]
    A = np.where(up, T[:-1] + X[:-1], T[1:] - X[1:])
    B = np.where(up, W[:-1], W[1:])
    C = np.where(up, M[:-1], M[1:])
    g00 = c_x * (A * s1_0 * m0 + B * s1_1 * m0 + C * s1_0 * m1)
    g10 = c_x * (A * s1_1 * m0 + B * s1_2 * m0 + C * s1_1 * m1)
    g01 = c_x * (A * s1_0 * m1 + B * s1_1 * m1 + C * s1_0 * m2)
    rT = g00[:-1] - g00[1:]
    rX = -(g00[:-1] + g00[1:])
    rW = g10[:-1] - g10[1:]
    rM = g01[:-1] - g01[1:]

    # volume terms
    E = e_cell[:, None, None]
    dxv = dx[:, None, None]
    base1 = Ti * s1_0 * m0 + Wi * s1_1 * m0 + Mi * s1_0 * m1
    base2 = Ti * s2_0 * mu_p[0][None, None, :] + Wi * s2_1 * mu_p[0][None, None, :] + (
        Mi * s2_0 * mu_p[1][None, None, :]
    )
    rX += 2.0 * c_x * base1
    rW += -4.0 * c_k * E * dxv / dw[None, :, None] * base1
    rM += -2.0 * c_k * E * dxv / dmu[None, None, :] * base2

    # w faces (interior only; boundary fluxes in w vanish)
    if dw.shape[0] > 1:
        use_lo = (mu_c[None, :] * e_cell[:, None] < 0.0)[:, None, :]
        Ah = np.where(use_lo, Ti[:, :-1] + Wi[:, :-1], Ti[:, 1:] - Wi[:, 1:])
        Bh = np.where(use_lo, Xi[:, :-1], Xi[:, 1:])
        Ch = np.where(use_lo, Mi[:, :-1], Mi[:, 1:])
        coef = -2.0 * c_k * E * s1f[None, 1:-1, None]
        h00 = coef * dxv * (Ah * m0 + Ch * m1)
        h10 = coef * (dxv / 3.0) * Bh * m0
        h01 = coef * dxv * (Ah * m1 + Ch * m2)
        rT[:, :-1] -= h00
        rT[:, 1:] += h00
        rX[:, :-1] -= h10
        rX[:, 1:] += h10
        rW[:, :-1] -= h00
        rW[:, 1:] -= h00
        rM[:, :-1] -= h01
        rM[:, 1:] += h01

    # mu faces (interior only)
    if dmu.shape[0] > 1:
        use_lo = (e_cell < 0.0)[:, None, None]
        Am = np.where(use_lo, Ti[:, :, :-1] + Mi[:, :, :-1], Ti[:, :, 1:] - Mi[:, :, 1:])
        Bm = np.where(use_lo, Xi[:, :, :-1], Xi[:, :, 1:])
        Cm = np.where(use_lo, Wi[:, :, :-1], Wi[:, :, 1:])
        coefm = -c_k * E * mu_face_p[None, None, 1:-1]
        k00 = coefm * dxv * (Am * s2_0 + Cm * s2_1)
        k10 = coefm * (dxv / 3.0) * Bm * s2_0
        k01 = coefm * dxv * (Am * s2_1 + Cm * s2_2)
        rT[:, :, :-1] -= k00
        rT[:, :, 1:] += k00
        rX[:, :, :-1] -= k10
        rX[:, :, 1:] += k10
        rW[:, :, :-1] -= k01
        rW[:, :, 1:] += k01
        rM[:, :, :-1] -= k00
        rM[:, :, 1:] -= k00

    vol = dxv * dw[None, :, None] * dmu[None, None, :]
    out[0] = rT / vol
    out[1] = 3.0 * rX / vol
    out[2] = 3.0 * rW / vol
    out[3] = 3.0 * rM / vol
    return out


# ---------------------------------------------------------------------------
# transport, 2D
# ---------------------------------------------------------------------------


def transport_rhs_2d(
    data, ex, ey, dx, dy, dw, dmu, dphi,
    s1m, s2m, s1f,
    mu_m, mu_r, mu_p, mu_q, mu_u, mu_face_p, mu_face_r, mu_edges, mu_c,
    phi_one, phi_c, phi_s, phi_face_sin, cos_c,
    c_x, c_k, out,
):
    T, X, Y, W, M, P = (data[c] for c in range(6))
    sl = (slice(1, -1), slice(1, -1))
    Ti, Xi, Yi, Wi, Mi, Pi = (a[sl] for a in (T, X, Y, W, M, P))

    def wv(tab, q):  # w tables broadcast over (k, m, n)
        return tab[q][:, None, None]

    def mv(tab, q):
        return tab[q][None, :, None]

    def pv(tab, q):
        return tab[q][None, None, :]

    S1 = [wv(s1m, q) for q in range(3)]
    S2 = [wv(s2m, q) for q in range(3)]
    MM = [mv(mu_m, q) for q in range(3)]
    RR = [mv(mu_r, q) for q in range(3)]
    PP = [mv(mu_p, q) for q in range(3)]
    QQ = [mv(mu_q, q) for q in range(3)]
    UU = [mv(mu_u, q) for q in range(3)]
    PO = [pv(phi_one, q) for q in range(3)]
    CC = [pv(phi_c, q) for q in range(3)]
    SS = [pv(phi_s, q) for q in range(3)]

    dxv = dx[:, None, None, None, None]
    dyv = dy[None, :, None, None, None]
    dwv = dw[None, None, :, None, None]
    dmuv = dmu[None, None, None, :, None]
    dphiv = dphi[None, None, None, None, :]
    Exv = ex[:, :, None, None, None]
    Eyv = ey[:, :, None, None, None]

    # ---- x faces -------------------------------------------------------
    Tx, Xx, Yx, Wx, Mx, Px = (a[:, 1:-1] for a in (T, X, Y, W, M, P))
    up = (mu_c > 0.0)[None, None, None, :, None]
    A = np.where(up, Tx[:-1] + Xx[:-1], Tx[1:] - Xx[1:])
    aY = np.where(up, Yx[:-1], Yx[1:])
    aW = np.where(up, Wx[:-1], Wx[1:])
    aM = np.where(up, Mx[:-1], Mx[1:])
    aP = np.where(up, Px[:-1], Px[1:])
    dyf = dy[None, :, None, None, None]
    g1 = c_x * dyf * (A * S1[0] * MM[0] + aW * S1[1] * MM[0] + aM * S1[0] * MM[1]) * PO[0]
    gy = c_x * (dyf / 3.0) * aY * S1[0] * MM[0] * PO[0]
    gw = c_x * dyf * (A * S1[1] * MM[0] + aW * S1[2] * MM[0] + aM * S1[1] * MM[1]) * PO[0]
    gm = c_x * dyf * (A * S1[0] * MM[1] + aW * S1[1] * MM[1] + aM * S1[0] * MM[2]) * PO[0]
    gp = c_x * dyf * aP * S1[0] * MM[0] * PO[2]
    rT = g1[:-1] - g1[1:]
    rX = -(g1[:-1] + g1[1:])
    rY = gy[:-1] - gy[1:]
    rW = gw[:-1] - gw[1:]
    rM = gm[:-1] - gm[1:]
    rP = gp[:-1] - gp[1:]

    # ---- y faces -------------------------------------------------------
    Ty, Xy, Yy, Wy, My, Py = (a[1:-1, :] for a in (T, X, Y, W, M, P))
    upy = (cos_c > 0.0)[None, None, None, None, :]
    B0 = np.where(upy, Ty[:, :-1] + Yy[:, :-1], Ty[:, 1:] - Yy[:, 1:])
    bX = np.where(upy, Xy[:, :-1], Xy[:, 1:])
    bW = np.where(upy, Wy[:, :-1], Wy[:, 1:])
    bM = np.where(upy, My[:, :-1], My[:, 1:])
    bP = np.where(upy, Py[:, :-1], Py[:, 1:])
    dxf = dx[:, None, None, None, None]
    h1 = c_x * dxf * (
        B0 * S1[0] * RR[0] * CC[0] + bW * S1[1] * RR[0] * CC[0]
        + bM * S1[0] * RR[1] * CC[0] + bP * S1[0] * RR[0] * CC[1]
    )
    hx = c_x * (dxf / 3.0) * bX * S1[0] * RR[0] * CC[0]
    hw = c_x * dxf * (
        B0 * S1[1] * RR[0] * CC[0] + bW * S1[2] * RR[0] * CC[0]
        + bM * S1[1] * RR[1] * CC[0] + bP * S1[1] * RR[0] * CC[1]
    )
    hm = c_x * dxf * (
        B0 * S1[0] * RR[1] * CC[0] + bW * S1[1] * RR[1] * CC[0]
        + bM * S1[0] * RR[2] * CC[0] + bP * S1[0] * RR[1] * CC[1]
    )
    hp = c_x * dxf * (
        B0 * S1[0] * RR[0] * CC[1] + bW * S1[1] * RR[0] * CC[1]
        + bM * S1[0] * RR[1] * CC[1] + bP * S1[0] * RR[0] * CC[2]
    )
    rT += h1[:, :-1] - h1[:, 1:]
    rX += hx[:, :-1] - hx[:, 1:]
    rY += -(h1[:, :-1] + h1[:, 1:])
    rW += hw[:, :-1] - hw[:, 1:]
    rM += hm[:, :-1] - hm[:, 1:]
    rP += hp[:, :-1] - hp[:, 1:]

    # ---- volume terms ---------------------------------------------------
    mu_part = Ti * S1[0] * MM[0] * PO[0] + Wi * S1[1] * MM[0] * PO[0] + Mi * S1[0] * MM[1] * PO[0]
    cs_part = (
        Ti * S1[0] * RR[0] * CC[0] + Wi * S1[1] * RR[0] * CC[0]
        + Mi * S1[0] * RR[1] * CC[0] + Pi * S1[0] * RR[0] * CC[1]
    )
    rX += 2.0 * c_x * dyv * mu_part
    rY += 2.0 * c_x * dxv * cs_part
    rW += -4.0 * c_k * dxv * dyv / dwv * (Exv * mu_part + Eyv * cs_part)
    pp_part = Ti * S2[0] * PP[0] * PO[0] + Wi * S2[1] * PP[0] * PO[0] + Mi * S2[0] * PP[1] * PO[0]
    qq_part = (
        Ti * S2[0] * QQ[0] * CC[0] + Wi * S2[1] * QQ[0] * CC[0]
        + Mi * S2[0] * QQ[1] * CC[0] + Pi * S2[0] * QQ[0] * CC[1]
    )
    rM += -2.0 * c_k * dxv * dyv / dmuv * (Exv * pp_part - Eyv * qq_part)
    uu_part = Ti * S2[0] * UU[0] * SS[0] + Wi * S2[1] * UU[0] * SS[0] + (
        Mi * S2[0] * UU[1] * SS[0] + Pi * S2[0] * UU[0] * SS[1]
    )
    rP += 2.0 * c_k * dxv * dyv / dphiv * Eyv * uu_part

    # ---- w faces ---------------------------------------------------------
    if dw.shape[0] > 1:
        area = dxv * dyv
        lo_hat = (mu_c[None, None, None, :, None] * Exv < 0.0)
        lo_til = (cos_c[None, None, None, None, :] * Eyv < 0.0)
        h0 = np.where(lo_hat, Ti[:, :, :-1] + Wi[:, :, :-1], Ti[:, :, 1:] - Wi[:, :, 1:])
        hX = np.where(lo_hat, Xi[:, :, :-1], Xi[:, :, 1:])
        hY = np.where(lo_hat, Yi[:, :, :-1], Yi[:, :, 1:])
        hM = np.where(lo_hat, Mi[:, :, :-1], Mi[:, :, 1:])
        hP = np.where(lo_hat, Pi[:, :, :-1], Pi[:, :, 1:])
        t0 = np.where(lo_til, Ti[:, :, :-1] + Wi[:, :, :-1], Ti[:, :, 1:] - Wi[:, :, 1:])
        tX = np.where(lo_til, Xi[:, :, :-1], Xi[:, :, 1:])
        tY = np.where(lo_til, Yi[:, :, :-1], Yi[:, :, 1:])
        tM = np.where(lo_til, Mi[:, :, :-1], Mi[:, :, 1:])
        tP = np.where(lo_til, Pi[:, :, :-1], Pi[:, :, 1:])
        coef = -2.0 * c_k * s1f[None, None, 1:-1, None, None]
        w1 = coef * area * (
            Exv * (h0 * MM[0] + hM * MM[1]) * PO[0]
            + Eyv * (t0 * RR[0] * CC[0] + tM * RR[1] * CC[0] + tP * RR[0] * CC[1])
        )
        wx = coef * (area / 3.0) * (Exv * hX * MM[0] * PO[0] + Eyv * tX * RR[0] * CC[0])
        wy = coef * (area / 3.0) * (Exv * hY * MM[0] * PO[0] + Eyv * tY * RR[0] * CC[0])
        wm = coef * area * (
            Exv * (h0 * MM[1] + hM * MM[2]) * PO[0]
            + Eyv * (t0 * RR[1] * CC[0] + tM * RR[2] * CC[0] + tP * RR[1] * CC[1])
        )
        wp = coef * area * (
            Exv * hP * MM[0] * PO[2]
            + Eyv * (t0 * RR[0] * CC[1] + tM * RR[1] * CC[1] + tP * RR[0] * CC[2])
        )
        rT[:, :, :-1] -= w1
        rT[:, :, 1:] += w1
        rX[:, :, :-1] -= wx
        rX[:, :, 1:] += wx
        rY[:, :, :-1] -= wy
        rY[:, :, 1:] += wy
        rW[:, :, :-1] -= w1
        rW[:, :, 1:] -= w1
        rM[:, :, :-1] -= wm
        rM[:, :, 1:] += wm
        rP[:, :, :-1] -= wp
        rP[:, :, 1:] += wp

    # ---- mu faces --------------------------------------------------------
    if dmu.shape[0] > 1:
        area = dxv * dyv
        pf = mu_face_p[1:-1][None, None, None, :, None]
        qf = (mu_edges[1:-1] * mu_face_r[1:-1])[None, None, None, :, None]
        lo_hat = np.broadcast_to(Exv < 0.0, rT[:, :, :, :-1, :].shape)
        mu_sgn = np.sign(mu_c[:-1])[None, None, None, :, None]
        lo_til = mu_sgn * cos_c[None, None, None, None, :] * Eyv > 0.0
        d0 = np.where(lo_hat, Ti[:, :, :, :-1] + Mi[:, :, :, :-1], Ti[:, :, :, 1:] - Mi[:, :, :, 1:])
        dX = np.where(lo_hat, Xi[:, :, :, :-1], Xi[:, :, :, 1:])
        dY = np.where(lo_hat, Yi[:, :, :, :-1], Yi[:, :, :, 1:])
        dW = np.where(lo_hat, Wi[:, :, :, :-1], Wi[:, :, :, 1:])
        dP = np.where(lo_hat, Pi[:, :, :, :-1], Pi[:, :, :, 1:])
        e0 = np.where(lo_til, Ti[:, :, :, :-1] + Mi[:, :, :, :-1], Ti[:, :, :, 1:] - Mi[:, :, :, 1:])
        eX = np.where(lo_til, Xi[:, :, :, :-1], Xi[:, :, :, 1:])
        eY = np.where(lo_til, Yi[:, :, :, :-1], Yi[:, :, :, 1:])
        eW = np.where(lo_til, Wi[:, :, :, :-1], Wi[:, :, :, 1:])
        eP = np.where(lo_til, Pi[:, :, :, :-1], Pi[:, :, :, 1:])
        m1f = -c_k * area * (
            Exv * pf * (d0 * S2[0] + dW * S2[1]) * PO[0]
            - Eyv * qf * (e0 * S2[0] * CC[0] + eW * S2[1] * CC[0] + eP * S2[0] * CC[1])
        )
        mxf = -c_k * (area / 3.0) * (
            Exv * pf * dX * S2[0] * PO[0] - Eyv * qf * eX * S2[0] * CC[0]
        )
        myf = -c_k * (area / 3.0) * (
            Exv * pf * dY * S2[0] * PO[0] - Eyv * qf * eY * S2[0] * CC[0]
        )
        mwf = -c_k * area * (
            Exv * pf * (d0 * S2[1] + dW * S2[2]) * PO[0]
            - Eyv * qf * (e0 * S2[1] * CC[0] + eW * S2[2] * CC[0] + eP * S2[1] * CC[1])
        )
        mpf = -c_k * area * (
            Exv * pf * dP * S2[0] * PO[2]
            - Eyv * qf * (e0 * S2[0] * CC[1] + eW * S2[1] * CC[1] + eP * S2[0] * CC[2])
        )
        rT[:, :, :, :-1] -= m1f
        rT[:, :, :, 1:] += m1f
        rX[:, :, :, :-1] -= mxf
        rX[:, :, :, 1:] += mxf
        rY[:, :, :, :-1] -= myf
        rY[:, :, :, 1:] += myf
        rW[:, :, :, :-1] -= mwf
        rW[:, :, :, 1:] += mwf
        rM[:, :, :, :-1] -= m1f
        rM[:, :, :, 1:] -= m1f
        rP[:, :, :, :-1] -= mpf
        rP[:, :, :, 1:] += mpf

    # ---- phi faces -------------------------------------------------------
    if dphi.shape[0] > 1:
        area = dxv * dyv
        sinf = phi_face_sin[1:-1][None, None, None, None, :]
        lo = np.broadcast_to(Eyv > 0.0, rT[:, :, :, :, :-1].shape)
        f0 = np.where(lo, Ti[:, :, :, :, :-1] + Pi[:, :, :, :, :-1], Ti[:, :, :, :, 1:] - Pi[:, :, :, :, 1:])
        fX = np.where(lo, Xi[:, :, :, :, :-1], Xi[:, :, :, :, 1:])
        fY = np.where(lo, Yi[:, :, :, :, :-1], Yi[:, :, :, :, 1:])
        fW = np.where(lo, Wi[:, :, :, :, :-1], Wi[:, :, :, :, 1:])
        fM = np.where(lo, Mi[:, :, :, :, :-1], Mi[:, :, :, :, 1:])
        coefp = c_k * Eyv * sinf * area
        p1 = coefp * (f0 * S2[0] * UU[0] + fW * S2[1] * UU[0] + fM * S2[0] * UU[1])
        px = (coefp / 3.0) * fX * S2[0] * UU[0]
        py = (coefp / 3.0) * fY * S2[0] * UU[0]
        pw = coefp * (f0 * S2[1] * UU[0] + fW * S2[2] * UU[0] + fM * S2[1] * UU[1])
        pm = coefp * (f0 * S2[0] * UU[1] + fW * S2[1] * UU[1] + fM * S2[0] * UU[2])
        rT[:, :, :, :, :-1] -= p1
        rT[:, :, :, :, 1:] += p1
        rX[:, :, :, :, :-1] -= px
        rX[:, :, :, :, 1:] += px
        rY[:, :, :, :, :-1] -= py
        rY[:, :, :, :, 1:] += py
        rW[:, :, :, :, :-1] -= pw
        rW[:, :, :, :, 1:] += pw
        rM[:, :, :, :, :-1] -= pm
        rM[:, :, :, :, 1:] += pm
        rP[:, :, :, :, :-1] -= p1
        rP[:, :, :, :, 1:] -= p1

    vol = dxv * dyv * dwv * dmuv * dphiv
    out[0] = rT / vol
    out[1] = 3.0 * rX / vol
    out[2] = 3.0 * rY / vol
    out[3] = 3.0 * rW / vol
    out[4] = 3.0 * rM / vol
    out[5] = 3.0 * rP / vol
    return out


# ---------------------------------------------------------------------------
# collision
# ---------------------------------------------------------------------------


def collision_rhs_1d(data, gain0, gain1, gain2, gain3, loss, dmu, dw, prefac, out):
    T, X, W, M = data[0, 1:-1], data[1, 1:-1], data[2, 1:-1], data[3, 1:-1]
    TS = T @ dmu  # (Nx, Nw)
    WS = W @ dmu
    XS = X @ dmu
    U0 = TS @ gain0.T + WS @ gain1.T
    UW = TS @ gain2.T + WS @ gain3.T
    UX = XS @ gain0.T
    l0 = loss[0][None, :, None]
    l1 = loss[1][None, :, None]
    l2 = loss[2][None, :, None]
    idw = (1.0 / dw)[None, :, None]
    out[0] = (prefac * U0[:, :, None] - (T * l0 + W * l1)) * idw
    out[1] = (prefac * UX[:, :, None] - X * l0) * idw
    out[2] = (3.0 * prefac * UW[:, :, None] - 3.0 * (T * l1 + W * l2)) * idw
    out[3] = -M * l0 * idw
    return out


def collision_rhs_2d(data, gain0, gain1, gain2, gain3, loss, dmu, dphi, dw, prefac, out):
    sl = (slice(1, -1), slice(1, -1))
    T, X, Y, W, M, P = (data[c][sl] for c in range(6))
    ang = np.outer(dmu, dphi)  # (Nm, Nf)
    TS = np.einsum("ijkmn,mn->ijk", T, ang)
    WS = np.einsum("ijkmn,mn->ijk", W, ang)
    XS = np.einsum("ijkmn,mn->ijk", X, ang)
    YS = np.einsum("ijkmn,mn->ijk", Y, ang)
    U0 = TS @ gain0.T + WS @ gain1.T
    UW = TS @ gain2.T + WS @ gain3.T
    UX = XS @ gain0.T
    UY = YS @ gain0.T
    l0 = loss[0][None, None, :, None, None]
    l1 = loss[1][None, None, :, None, None]
    l2 = loss[2][None, None, :, None, None]
    idw = (1.0 / dw)[None, None, :, None, None]
    bc = (slice(None), slice(None), slice(None), None, None)
    out[0] = (prefac * U0[bc] - (T * l0 + W * l1)) * idw
    out[1] = (prefac * UX[bc] - X * l0) * idw
    out[2] = (prefac * UY[bc] - Y * l0) * idw
    out[3] = (3.0 * prefac * UW[bc] - 3.0 * (T * l1 + W * l2)) * idw
    out[4] = -M * l0 * idw
    out[5] = -P * l0 * idw
    return out

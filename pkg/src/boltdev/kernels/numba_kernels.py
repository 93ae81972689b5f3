"""Jitted loop implementations of the RHS kernels.

Each spatial cell evaluates its own face fluxes (shared faces are computed
twice, once per side) so writes stay cell-local and the prange result is
bit-identical for any thread count.  Formulas mirror numpy_kernels exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

NAME = "numba"

_JIT = dict(cache=True, parallel=True, fastmath=False)


@njit(**_JIT)
def transport_rhs_1d(
    data, e_cell, dx, dw, s1m, s2m, s1f, mu_m, mu_p, mu_face_p, mu_c, dmu, c_x, c_k, out
):
    nx = e_cell.shape[0]
    nw = dw.shape[0]
    nm = dmu.shape[0]
    for i in prange(nx):
        ii = i + 1
        E = e_cell[i]
        dxi = dx[i]
        for k in range(nw):
            for m in range(nm):
                rT = 0.0
                rX = 0.0
                rW = 0.0
                rM = 0.0
                # --- x faces: upwind by the sign of the cell-center mu
                for side in range(2):
                    # side 1: right face of this cell, side 0: left face
                    if mu_c[m] > 0.0:
                        up_cell = ii - 1 + side
                        asg = 1.0
                    else:
                        up_cell = ii + side
                        asg = -1.0
                    a = data[0, up_cell, k, m] + asg * data[1, up_cell, k, m]
                    b = data[2, up_cell, k, m]
                    c = data[3, up_cell, k, m]
                    g1 = c_x * (a * s1m[0, k] * mu_m[0, m] + b * s1m[1, k] * mu_m[0, m] + c * s1m[0, k] * mu_m[1, m])
                    gw = c_x * (a * s1m[1, k] * mu_m[0, m] + b * s1m[2, k] * mu_m[0, m] + c * s1m[1, k] * mu_m[1, m])
                    gm = c_x * (a * s1m[0, k] * mu_m[1, m] + b * s1m[1, k] * mu_m[1, m] + c * s1m[0, k] * mu_m[2, m])
                    if side == 1:
                        rT -= g1
                        rX -= g1
                        rW -= gw
                        rM -= gm
                    else:
                        rT += g1
                        rX -= g1
                        rW += gw
                        rM += gm
                # --- w faces (interior faces only)
                for side in range(2):
                    kf = k + side  # face index; flux vanishes at kf == 0 and kf == nw
                    if kf == 0 or kf == nw:
                        continue
                    lo = mu_c[m] * E < 0.0
                    kc = kf - 1 if lo else kf
                    wsg = 1.0 if lo else -1.0
                    a = data[0, ii, kc, m] + wsg * data[2, ii, kc, m]
                    bx = data[1, ii, kc, m]
                    cmu = data[3, ii, kc, m]
                    coef = -2.0 * c_k * E * s1f[kf]
                    h1 = coef * dxi * (a * mu_m[0, m] + cmu * mu_m[1, m])
                    hx = coef * (dxi / 3.0) * bx * mu_m[0, m]
                    hm = coef * dxi * (a * mu_m[1, m] + cmu * mu_m[2, m])
                    if side == 1:  # upper face of this cell
                        rT -= h1
                        rX -= hx
                        rW -= h1
                        rM -= hm
                    else:  # lower face
                        rT += h1
                        rX += hx
                        rW -= h1
                        rM += hm
                # --- mu faces (interior faces only)
                for side in range(2):
                    mf = m + side
                    if mf == 0 or mf == nm:
                        continue
                    lo = E < 0.0
                    mc = mf - 1 if lo else mf
                    msg = 1.0 if lo else -1.0
                    a = data[0, ii, k, mc] + msg * data[3, ii, k, mc]
                    bx = data[1, ii, k, mc]
                    bw = data[2, ii, k, mc]
                    coefm = -c_k * E * mu_face_p[mf]
                    k1 = coefm * dxi * (a * s2m[0, k] + bw * s2m[1, k])
                    kx = coefm * (dxi / 3.0) * bx * s2m[0, k]
                    kw = coefm * dxi * (a * s2m[1, k] + bw * s2m[2, k])
                    if side == 1:
                        rT -= k1
                        rX -= kx
                        rW -= kw
                        rM -= k1
                    else:
                        rT += k1
                        rX += kx
                        rW += kw
                        rM -= k1
                # --- volume terms
                T = data[0, ii, k, m]
                W = data[2, ii, k, m]
                M = data[3, ii, k, m]
                base1 = T * s1m[0, k] * mu_m[0, m] + W * s1m[1, k] * mu_m[0, m] + M * s1m[0, k] * mu_m[1, m]
                base2 = T * s2m[0, k] * mu_p[0, m] + W * s2m[1, k] * mu_p[0, m] + M * s2m[0, k] * mu_p[1, m]
                rX += 2.0 * c_x * base1
                rW += -4.0 * c_k * E * dxi / dw[k] * base1
                rM += -2.0 * c_k * E * dxi / dmu[m] * base2

                vol = dxi * dw[k] * dmu[m]
                out[0, i, k, m] = rT / vol
                out[1, i, k, m] = 3.0 * rX / vol
                out[2, i, k, m] = 3.0 * rW / vol
                out[3, i, k, m] = 3.0 * rM / vol
    return out


@njit(**_JIT)
def transport_rhs_2d(
    data, ex, ey, dx, dy, dw, dmu, dphi,
    s1m, s2m, s1f,
    mu_m, mu_r, mu_p, mu_q, mu_u, mu_face_p, mu_face_r, mu_edges, mu_c,
    phi_one, phi_c, phi_s, phi_face_sin, cos_c,
    c_x, c_k, out,
):
    nx = ex.shape[0]
    ny = ex.shape[1]
    nw = dw.shape[0]
    nm = dmu.shape[0]
    nf = dphi.shape[0]
    for i in prange(nx):
        ii = i + 1
        for j in range(ny):
            jj = j + 1
            Ex = ex[i, j]
            Ey = ey[i, j]
            dxi = dx[i]
            dyj = dy[j]
            area = dxi * dyj
            for k in range(nw):
                for m in range(nm):
                    for n in range(nf):
                        rT = 0.0
                        rX = 0.0
                        rY = 0.0
                        rW = 0.0
                        rM = 0.0
                        rP = 0.0
                        # ---- x faces
                        for side in range(2):
                            if mu_c[m] > 0.0:
                                uc = ii - 1 + side
                                asg = 1.0
                            else:
                                uc = ii + side
                                asg = -1.0
                            a0 = data[0, uc, jj, k, m, n] + asg * data[1, uc, jj, k, m, n]
                            ay = data[2, uc, jj, k, m, n]
                            aw = data[3, uc, jj, k, m, n]
                            am = data[4, uc, jj, k, m, n]
                            ap = data[5, uc, jj, k, m, n]
                            g1 = c_x * dyj * (a0 * s1m[0, k] * mu_m[0, m] + aw * s1m[1, k] * mu_m[0, m] + am * s1m[0, k] * mu_m[1, m]) * phi_one[0, n]
                            gy = c_x * (dyj / 3.0) * ay * s1m[0, k] * mu_m[0, m] * phi_one[0, n]
                            gw = c_x * dyj * (a0 * s1m[1, k] * mu_m[0, m] + aw * s1m[2, k] * mu_m[0, m] + am * s1m[1, k] * mu_m[1, m]) * phi_one[0, n]
                            gm = c_x * dyj * (a0 * s1m[0, k] * mu_m[1, m] + aw * s1m[1, k] * mu_m[1, m] + am * s1m[0, k] * mu_m[2, m]) * phi_one[0, n]
                            gp = c_x * dyj * ap * s1m[0, k] * mu_m[0, m] * phi_one[2, n]
                            if side == 1:
                                rT -= g1
                                rX -= g1
                                rY -= gy
                                rW -= gw
                                rM -= gm
                                rP -= gp
                            else:
                                rT += g1
                                rX -= g1
                                rY += gy
                                rW += gw
                                rM += gm
                                rP += gp
                        # ---- y faces
                        for side in range(2):
                            if cos_c[n] > 0.0:
                                uc = jj - 1 + side
                                asg = 1.0
                            else:
                                uc = jj + side
                                asg = -1.0
                            b0 = data[0, ii, uc, k, m, n] + asg * data[2, ii, uc, k, m, n]
                            bx = data[1, ii, uc, k, m, n]
                            bw = data[3, ii, uc, k, m, n]
                            bm = data[4, ii, uc, k, m, n]
                            bp = data[5, ii, uc, k, m, n]
                            h1 = c_x * dxi * (b0 * s1m[0, k] * mu_r[0, m] * phi_c[0, n] + bw * s1m[1, k] * mu_r[0, m] * phi_c[0, n] + bm * s1m[0, k] * mu_r[1, m] * phi_c[0, n] + bp * s1m[0, k] * mu_r[0, m] * phi_c[1, n])
                            hx = c_x * (dxi / 3.0) * bx * s1m[0, k] * mu_r[0, m] * phi_c[0, n]
                            hw = c_x * dxi * (b0 * s1m[1, k] * mu_r[0, m] * phi_c[0, n] + bw * s1m[2, k] * mu_r[0, m] * phi_c[0, n] + bm * s1m[1, k] * mu_r[1, m] * phi_c[0, n] + bp * s1m[1, k] * mu_r[0, m] * phi_c[1, n])
                            hm = c_x * dxi * (b0 * s1m[0, k] * mu_r[1, m] * phi_c[0, n] + bw * s1m[1, k] * mu_r[1, m] * phi_c[0, n] + bm * s1m[0, k] * mu_r[2, m] * phi_c[0, n] + bp * s1m[0, k] * mu_r[1, m] * phi_c[1, n])
                            hp = c_x * dxi * (b0 * s1m[0, k] * mu_r[0, m] * phi_c[1, n] + bw * s1m[1, k] * mu_r[0, m] * phi_c[1, n] + bm * s1m[0, k] * mu_r[1, m] * phi_c[1, n] + bp * s1m[0, k] * mu_r[0, m] * phi_c[2, n])
                            if side == 1:
                                rT -= h1
                                rX -= hx
                                rY -= h1
                                rW -= hw
                                rM -= hm
                                rP -= hp
                            else:
                                rT += h1
                                rX += hx
                                rY -= h1
                                rW += hw
                                rM += hm
                                rP += hp
                        # ---- w faces
                        for side in range(2):
                            kf = k + side
                            if kf == 0 or kf == nw:
                                continue
                            lo_hat = mu_c[m] * Ex < 0.0
                            kc = kf - 1 if lo_hat else kf
                            hsg = 1.0 if lo_hat else -1.0
                            h0 = data[0, ii, jj, kc, m, n] + hsg * data[3, ii, jj, kc, m, n]
                            hX = data[1, ii, jj, kc, m, n]
                            hY = data[2, ii, jj, kc, m, n]
                            hM = data[4, ii, jj, kc, m, n]
                            hP = data[5, ii, jj, kc, m, n]
                            lo_til = cos_c[n] * Ey < 0.0
                            kt = kf - 1 if lo_til else kf
                            tsg = 1.0 if lo_til else -1.0
                            t0 = data[0, ii, jj, kt, m, n] + tsg * data[3, ii, jj, kt, m, n]
                            tX = data[1, ii, jj, kt, m, n]
                            tY = data[2, ii, jj, kt, m, n]
                            tM = data[4, ii, jj, kt, m, n]
                            tP = data[5, ii, jj, kt, m, n]
                            coef = -2.0 * c_k * s1f[kf]
                            w1 = coef * area * (Ex * (h0 * mu_m[0, m] + hM * mu_m[1, m]) * phi_one[0, n] + Ey * (t0 * mu_r[0, m] * phi_c[0, n] + tM * mu_r[1, m] * phi_c[0, n] + tP * mu_r[0, m] * phi_c[1, n]))
                            wx = coef * (area / 3.0) * (Ex * hX * mu_m[0, m] * phi_one[0, n] + Ey * tX * mu_r[0, m] * phi_c[0, n])
                            wy = coef * (area / 3.0) * (Ex * hY * mu_m[0, m] * phi_one[0, n] + Ey * tY * mu_r[0, m] * phi_c[0, n])
                            wm = coef * area * (Ex * (h0 * mu_m[1, m] + hM * mu_m[2, m]) * phi_one[0, n] + Ey * (t0 * mu_r[1, m] * phi_c[0, n] + tM * mu_r[2, m] * phi_c[0, n] + tP * mu_r[1, m] * phi_c[1, n]))
                            wp = coef * area * (Ex * hP * mu_m[0, m] * phi_one[2, n] + Ey * (t0 * mu_r[0, m] * phi_c[1, n] + tM * mu_r[1, m] * phi_c[1, n] + tP * mu_r[0, m] * phi_c[2, n]))
                            if side == 1:
                                rT -= w1
                                rX -= wx
                                rY -= wy
                                rW -= w1
                                rM -= wm
                                rP -= wp
                            else:
                                rT += w1
                                rX += wx
                                rY += wy
                                rW -= w1
                                rM += wm
                                rP += wp
                        # ---- mu faces
                        for side in range(2):
                            mf = m + side
                            if mf == 0 or mf == nm:
                                continue
                            pf = mu_face_p[mf]
                            qf = mu_edges[mf] * mu_face_r[mf]
                            lo_hat = Ex < 0.0
                            mc = mf - 1 if lo_hat else mf
                            hsg = 1.0 if lo_hat else -1.0
                            d0 = data[0, ii, jj, k, mc, n] + hsg * data[4, ii, jj, k, mc, n]
                            dX = data[1, ii, jj, k, mc, n]
                            dY = data[2, ii, jj, k, mc, n]
                            dW = data[3, ii, jj, k, mc, n]
                            dP = data[5, ii, jj, k, mc, n]
                            mu_sgn = 1.0 if mu_c[mf - 1] > 0.0 else (-1.0 if mu_c[mf - 1] < 0.0 else 0.0)
                            lo_til = mu_sgn * cos_c[n] * Ey > 0.0
                            mt = mf - 1 if lo_til else mf
                            tsg = 1.0 if lo_til else -1.0
                            e0 = data[0, ii, jj, k, mt, n] + tsg * data[4, ii, jj, k, mt, n]
                            eX = data[1, ii, jj, k, mt, n]
                            eY = data[2, ii, jj, k, mt, n]
                            eW = data[3, ii, jj, k, mt, n]
                            eP = data[5, ii, jj, k, mt, n]
                            m1 = -c_k * area * (Ex * pf * (d0 * s2m[0, k] + dW * s2m[1, k]) * phi_one[0, n] - Ey * qf * (e0 * s2m[0, k] * phi_c[0, n] + eW * s2m[1, k] * phi_c[0, n] + eP * s2m[0, k] * phi_c[1, n]))
                            mx = -c_k * (area / 3.0) * (Ex * pf * dX * s2m[0, k] * phi_one[0, n] - Ey * qf * eX * s2m[0, k] * phi_c[0, n])
                            my = -c_k * (area / 3.0) * (Ex * pf * dY * s2m[0, k] * phi_one[0, n] - Ey * qf * eY * s2m[0, k] * phi_c[0, n])
                            mw = -c_k * area * (Ex * pf * (d0 * s2m[1, k] + dW * s2m[2, k]) * phi_one[0, n] - Ey * qf * (e0 * s2m[1, k] * phi_c[0, n] + eW * s2m[2, k] * phi_c[0, n] + eP * s2m[1, k] * phi_c[1, n]))
                            mp = -c_k * area * (Ex * pf * dP * s2m[0, k] * phi_one[2, n] - Ey * qf * (e0 * s2m[0, k] * phi_c[1, n] + eW * s2m[1, k] * phi_c[1, n] + eP * s2m[0, k] * phi_c[2, n]))
                            if side == 1:
                                rT -= m1
                                rX -= mx
                                rY -= my
                                rW -= mw
                                rM -= m1
                                rP -= mp
                            else:
                                rT += m1
                                rX += mx
                                rY += my
                                rW += mw
                                rM -= m1
                                rP += mp
                        # ---- phi faces
                        for side in range(2):
                            nfc = n + side
                            if nfc == 0 or nfc == nf:
                                continue
                            lo = Ey > 0.0
                            nc = nfc - 1 if lo else nfc
                            psg = 1.0 if lo else -1.0
                            f0 = data[0, ii, jj, k, m, nc] + psg * data[5, ii, jj, k, m, nc]
                            fX = data[1, ii, jj, k, m, nc]
                            fY = data[2, ii, jj, k, m, nc]
                            fW = data[3, ii, jj, k, m, nc]
                            fM = data[4, ii, jj, k, m, nc]
                            coefp = c_k * Ey * phi_face_sin[nfc] * area
                            p1 = coefp * (f0 * s2m[0, k] * mu_u[0, m] + fW * s2m[1, k] * mu_u[0, m] + fM * s2m[0, k] * mu_u[1, m])
                            px = (coefp / 3.0) * fX * s2m[0, k] * mu_u[0, m]
                            py = (coefp / 3.0) * fY * s2m[0, k] * mu_u[0, m]
                            pw = coefp * (f0 * s2m[1, k] * mu_u[0, m] + fW * s2m[2, k] * mu_u[0, m] + fM * s2m[1, k] * mu_u[1, m])
                            pm = coefp * (f0 * s2m[0, k] * mu_u[1, m] + fW * s2m[1, k] * mu_u[1, m] + fM * s2m[0, k] * mu_u[2, m])
                            if side == 1:
                                rT -= p1
                                rX -= px
                                rY -= py
                                rW -= pw
                                rM -= pm
                                rP -= p1
                            else:
                                rT += p1
                                rX += px
                                rY += py
                                rW += pw
                                rM += pm
                                rP -= p1
                        # ---- volume terms
                        T = data[0, ii, jj, k, m, n]
                        W = data[3, ii, jj, k, m, n]
                        M = data[4, ii, jj, k, m, n]
                        Pc = data[5, ii, jj, k, m, n]
                        mu_part = T * s1m[0, k] * mu_m[0, m] * phi_one[0, n] + W * s1m[1, k] * mu_m[0, m] * phi_one[0, n] + M * s1m[0, k] * mu_m[1, m] * phi_one[0, n]
                        cs_part = T * s1m[0, k] * mu_r[0, m] * phi_c[0, n] + W * s1m[1, k] * mu_r[0, m] * phi_c[0, n] + M * s1m[0, k] * mu_r[1, m] * phi_c[0, n] + Pc * s1m[0, k] * mu_r[0, m] * phi_c[1, n]
                        rX += 2.0 * c_x * dyj * mu_part
                        rY += 2.0 * c_x * dxi * cs_part
                        rW += -4.0 * c_k * area / dw[k] * (Ex * mu_part + Ey * cs_part)
                        pp_part = T * s2m[0, k] * mu_p[0, m] * phi_one[0, n] + W * s2m[1, k] * mu_p[0, m] * phi_one[0, n] + M * s2m[0, k] * mu_p[1, m] * phi_one[0, n]
                        qq_part = T * s2m[0, k] * mu_q[0, m] * phi_c[0, n] + W * s2m[1, k] * mu_q[0, m] * phi_c[0, n] + M * s2m[0, k] * mu_q[1, m] * phi_c[0, n] + Pc * s2m[0, k] * mu_q[0, m] * phi_c[1, n]
                        rM += -2.0 * c_k * area / dmu[m] * (Ex * pp_part - Ey * qq_part)
                        uu_part = T * s2m[0, k] * mu_u[0, m] * phi_s[0, n] + W * s2m[1, k] * mu_u[0, m] * phi_s[0, n] + M * s2m[0, k] * mu_u[1, m] * phi_s[0, n] + Pc * s2m[0, k] * mu_u[0, m] * phi_s[1, n]
                        rP += 2.0 * c_k * area / dphi[n] * Ey * uu_part

                        vol = area * dw[k] * dmu[m] * dphi[n]
                        out[0, i, j, k, m, n] = rT / vol
                        out[1, i, j, k, m, n] = 3.0 * rX / vol
                        out[2, i, j, k, m, n] = 3.0 * rY / vol
                        out[3, i, j, k, m, n] = 3.0 * rW / vol
                        out[4, i, j, k, m, n] = 3.0 * rM / vol
                        out[5, i, j, k, m, n] = 3.0 * rP / vol
    return out


@njit(**_JIT)
def collision_rhs_1d(data, gain0, gain1, gain2, gain3, loss, dmu, dw, prefac, out):
    nx = data.shape[1] - 2
    nw = dw.shape[0]
    nm = dmu.shape[0]
    for i in prange(nx):
        ii = i + 1
        ts = np.zeros(nw)
        ws = np.zeros(nw)
        xs = np.zeros(nw)
        for k in range(nw):
            t_acc = 0.0
            w_acc = 0.0
            x_acc = 0.0
            for m in range(nm):
                t_acc += data[0, ii, k, m] * dmu[m]
                w_acc += data[2, ii, k, m] * dmu[m]
                x_acc += data[1, ii, k, m] * dmu[m]
            ts[k] = t_acc
            ws[k] = w_acc
            xs[k] = x_acc
        for k in range(nw):
            u0 = 0.0
            uw = 0.0
            ux = 0.0
            for kp in range(nw):
                u0 += gain0[k, kp] * ts[kp] + gain1[k, kp] * ws[kp]
                uw += gain2[k, kp] * ts[kp] + gain3[k, kp] * ws[kp]
                ux += gain0[k, kp] * xs[kp]
            idw = 1.0 / dw[k]
            for m in range(nm):
                T = data[0, ii, k, m]
                X = data[1, ii, k, m]
                W = data[2, ii, k, m]
                M = data[3, ii, k, m]
                out[0, i, k, m] = (prefac * u0 - (T * loss[0, k] + W * loss[1, k])) * idw
                out[1, i, k, m] = (prefac * ux - X * loss[0, k]) * idw
                out[2, i, k, m] = (3.0 * prefac * uw - 3.0 * (T * loss[1, k] + W * loss[2, k])) * idw
                out[3, i, k, m] = -M * loss[0, k] * idw
    return out


@njit(**_JIT)
def collision_rhs_2d(data, gain0, gain1, gain2, gain3, loss, dmu, dphi, dw, prefac, out):
    nx = data.shape[1] - 2
    ny = data.shape[2] - 2
    nw = dw.shape[0]
    nm = dmu.shape[0]
    nf = dphi.shape[0]
    for i in prange(nx):
        ii = i + 1
        ts = np.zeros(nw)
        ws = np.zeros(nw)
        xs = np.zeros(nw)
        ys = np.zeros(nw)
        for j in range(ny):
            jj = j + 1
            for k in range(nw):
                t_acc = 0.0
                w_acc = 0.0
                x_acc = 0.0
                y_acc = 0.0
                for m in range(nm):
                    for n in range(nf):
                        ang = dmu[m] * dphi[n]
                        t_acc += data[0, ii, jj, k, m, n] * ang
                        x_acc += data[1, ii, jj, k, m, n] * ang
                        y_acc += data[2, ii, jj, k, m, n] * ang
                        w_acc += data[3, ii, jj, k, m, n] * ang
                ts[k] = t_acc
                ws[k] = w_acc
                xs[k] = x_acc
                ys[k] = y_acc
            for k in range(nw):
                u0 = 0.0
                uw = 0.0
                ux = 0.0
                uy = 0.0
                for kp in range(nw):
                    u0 += gain0[k, kp] * ts[kp] + gain1[k, kp] * ws[kp]
                    uw += gain2[k, kp] * ts[kp] + gain3[k, kp] * ws[kp]
                    ux += gain0[k, kp] * xs[kp]
                    uy += gain0[k, kp] * ys[kp]
                idw = 1.0 / dw[k]
                for m in range(nm):
                    for n in range(nf):
                        T = data[0, ii, jj, k, m, n]
                        X = data[1, ii, jj, k, m, n]
                        Y = data[2, ii, jj, k, m, n]
                        W = data[3, ii, jj, k, m, n]
                        M = data[4, ii, jj, k, m, n]
                        P = data[5, ii, jj, k, m, n]
                        out[0, i, j, k, m, n] = (prefac * u0 - (T * loss[0, k] + W * loss[1, k])) * idw
                        out[1, i, j, k, m, n] = (prefac * ux - X * loss[0, k]) * idw
                        out[2, i, j, k, m, n] = (prefac * uy - Y * loss[0, k]) * idw
                        out[3, i, j, k, m, n] = (3.0 * prefac * uw - 3.0 * (T * loss[1, k] + W * loss[2, k])) * idw
                        out[4, i, j, k, m, n] = -M * loss[0, k] * idw
                        out[5, i, j, k, m, n] = -P * loss[0, k] * idw
    return out

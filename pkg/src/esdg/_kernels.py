"""Compiled inner loops: two-point fluxes, line-wise flux differencing, interface fluxes.

Node states are passed as "primitive records" of length d+5:
``(rho, u_1..u_d, p, log rho, beta, log beta)`` with ``beta = rho/(2p)``.
"""

import numpy as np
from numba import njit
from numba.extending import overload

DISS_NONE = 0
DISS_LF = 1
DISS_MATRIX = 2


@njit(cache=True, inline="always")
def _log_mean(a, b, la, lb):
    # (a - b)/(la - lb) = (a + b) tanh(y)/(2y) with y = (la - lb)/2; series for small y
    y = 0.5 * (la - lb)
    y2 = y * y
    if y2 < 1e-4:
        return 0.5 * (a + b) * (1.0 - y2 * (1.0 / 3.0 - y2 * (2.0 / 15.0 - y2 * (17.0 / 315.0))))
    return (a - b) / (la - lb)


@njit(cache=True)
def prim_records(u, gamma, out):
    """Fill primitive records for a (M, d+2) array of conservative states."""
    d = u.shape[1] - 2
    for m in range(u.shape[0]):
        rho = u[m, 0]
        ke = 0.0
        for i in range(d):
            vi = u[m, 1 + i] / rho
            out[m, 1 + i] = vi
            ke += vi * u[m, 1 + i]
        p = (gamma - 1.0) * (u[m, d + 1] - 0.5 * ke)
        out[m, 0] = rho
        out[m, d + 1] = p
        out[m, d + 2] = np.log(rho)
        beta = rho / (2.0 * p)
        out[m, d + 3] = beta
        out[m, d + 4] = np.log(beta)


@njit(cache=True, inline="always")
def _averages(A, ia, B, ib, d, gamma):
    rho_log = _log_mean(A[ia, 0], B[ib, 0], A[ia, d + 2], B[ib, d + 2])
    beta_log = _log_mean(A[ia, d + 3], B[ib, d + 3], A[ia, d + 4], B[ib, d + 4])
    p_avg = 0.5 * (A[ia, 0] + B[ib, 0]) / (A[ia, d + 3] + B[ib, d + 3])
    return rho_log, beta_log, p_avg


@njit(cache=True, inline="always")
def _flux_1d(A, ia, B, ib, g, gamma):
    rl, bl, pa = _averages(A, ia, B, ib, 1, gamma)
    a1 = A[ia, 1]
    b1 = B[ib, 1]
    u1 = 0.5 * (a1 + b1)
    un = u1 * g[0]
    usq = 2.0 * u1 * u1 - 0.5 * (a1 * a1 + b1 * b1)
    E = rl / (2.0 * (gamma - 1.0) * bl) + 0.5 * rl * usq
    m = rl * un
    return (m, m * u1 + pa * g[0], (E + pa) * un)


@njit(cache=True, inline="always")
def _flux_2d(A, ia, B, ib, g, gamma):
    rl, bl, pa = _averages(A, ia, B, ib, 2, gamma)
    a1 = A[ia, 1]
    b1 = B[ib, 1]
    a2 = A[ia, 2]
    b2 = B[ib, 2]
    u1 = 0.5 * (a1 + b1)
    u2 = 0.5 * (a2 + b2)
    un = u1 * g[0] + u2 * g[1]
    usq = 2.0 * (u1 * u1 + u2 * u2) - 0.5 * (a1 * a1 + b1 * b1 + a2 * a2 + b2 * b2)
    E = rl / (2.0 * (gamma - 1.0) * bl) + 0.5 * rl * usq
    m = rl * un
    return (m, m * u1 + pa * g[0], m * u2 + pa * g[1], (E + pa) * un)


@njit(cache=True, inline="always")
def _flux_3d(A, ia, B, ib, g, gamma):
    rl, bl, pa = _averages(A, ia, B, ib, 3, gamma)
    a1 = A[ia, 1]
    b1 = B[ib, 1]
    a2 = A[ia, 2]
    b2 = B[ib, 2]
    a3 = A[ia, 3]
    b3 = B[ib, 3]
    u1 = 0.5 * (a1 + b1)
    u2 = 0.5 * (a2 + b2)
    u3 = 0.5 * (a3 + b3)
    un = u1 * g[0] + u2 * g[1] + u3 * g[2]
    usq = (2.0 * (u1 * u1 + u2 * u2 + u3 * u3)
           - 0.5 * (a1 * a1 + b1 * b1 + a2 * a2 + b2 * b2 + a3 * a3 + b3 * b3))
    E = rl / (2.0 * (gamma - 1.0) * bl) + 0.5 * rl * usq
    m = rl * un
    return (m, m * u1 + pa * g[0], m * u2 + pa * g[1], m * u3 + pa * g[2], (E + pa) * un)


# Metric combinations as tuples: column j of G at two nodes, or at a node and a face point.

@njit(cache=True, inline="always")
def _gpair_1d(Gk, ma, mb, j):
    return (Gk[ma, 0, j] + Gk[mb, 0, j],)


@njit(cache=True, inline="always")
def _gpair_2d(Gk, ma, mb, j):
    return (Gk[ma, 0, j] + Gk[mb, 0, j], Gk[ma, 1, j] + Gk[mb, 1, j])


@njit(cache=True, inline="always")
def _gpair_3d(Gk, ma, mb, j):
    return (Gk[ma, 0, j] + Gk[mb, 0, j], Gk[ma, 1, j] + Gk[mb, 1, j], Gk[ma, 2, j] + Gk[mb, 2, j])


@njit(cache=True, inline="always")
def _gface_1d(Gk, ma, nJk, fs, sig, j):
    return (Gk[ma, 0, j] + sig * nJk[fs, 0],)


@njit(cache=True, inline="always")
def _gface_2d(Gk, ma, nJk, fs, sig, j):
    return (Gk[ma, 0, j] + sig * nJk[fs, 0], Gk[ma, 1, j] + sig * nJk[fs, 1])


@njit(cache=True, inline="always")
def _gface_3d(Gk, ma, nJk, fs, sig, j):
    return (Gk[ma, 0, j] + sig * nJk[fs, 0], Gk[ma, 1, j] + sig * nJk[fs, 1],
            Gk[ma, 2, j] + sig * nJk[fs, 2])


@njit(cache=True, inline="always")
def _row_1d(X, m):
    return (X[m, 0],)


@njit(cache=True, inline="always")
def _row_2d(X, m):
    return (X[m, 0], X[m, 1])


@njit(cache=True, inline="always")
def _row_3d(X, m):
    return (X[m, 0], X[m, 1], X[m, 2])


# Dimension-generic entry points.  The dimension is carried by the length of a
# tuple argument so that compiled kernels specialize (and cache) per d.

def _flux(A, ia, B, ib, g, gamma):
    raise NotImplementedError


def _gpair(Gk, ma, mb, j, dim):
    raise NotImplementedError


def _gface(Gk, ma, nJk, fs, sig, j, dim):
    raise NotImplementedError


def _row(X, m, dim):
    raise NotImplementedError


@overload(_flux)
def _ov_flux(A, ia, B, ib, g, gamma):
    impl = {1: _flux_1d, 2: _flux_2d, 3: _flux_3d}[len(g)]
    return lambda A, ia, B, ib, g, gamma: impl(A, ia, B, ib, g, gamma)


@overload(_gpair)
def _ov_gpair(Gk, ma, mb, j, dim):
    impl = {1: _gpair_1d, 2: _gpair_2d, 3: _gpair_3d}[len(dim)]
    return lambda Gk, ma, mb, j, dim: impl(Gk, ma, mb, j)


@overload(_gface)
def _ov_gface(Gk, ma, nJk, fs, sig, j, dim):
    impl = {1: _gface_1d, 2: _gface_2d, 3: _gface_3d}[len(dim)]
    return lambda Gk, ma, nJk, fs, sig, j, dim: impl(Gk, ma, nJk, fs, sig, j)


@overload(_row)
def _ov_row(X, m, dim):
    impl = {1: _row_1d, 2: _row_2d, 3: _row_3d}[len(dim)]
    return lambda X, m, dim: impl(X, m)


def _dim(d):
    return (0,) * d


@njit(cache=True, fastmath=True)
def _volume_kernel(dim, prim, primf, G, nJ, line_nodes, line_faces, wperp, S1, tL, tR, gauss, gamma, R):
    K = prim.shape[0]
    d = G.shape[2]
    nv = R.shape[2]
    n = S1.shape[0]
    nl = line_nodes.shape[1]
    Fs = np.empty((n, nv))
    acc = np.empty(nv)
    for k in range(K):
        P = prim[k]
        Pf = primf[k]
        Gk = G[k]
        nJk = nJ[k]
        Rk = R[k]
        for j in range(d):
            for l in range(nl):
                wp = wperp[j, l]
                for a in range(n):
                    ma = line_nodes[j, l, a]
                    for b in range(a + 1, n):
                        mb = line_nodes[j, l, b]
                        f = _flux(P, ma, P, mb, _gpair(Gk, ma, mb, j, dim), gamma)
                        c = wp * S1[a, b]
                        for q in range(len(f)):
                            Rk[ma, q] += c * f[q]
                            Rk[mb, q] -= c * f[q]
                if gauss:
                    for s in range(2):
                        sig = -1.0 if s == 0 else 1.0
                        fs = line_faces[j, l, s]
                        for q in range(nv):
                            acc[q] = 0.0
                        for a in range(n):
                            ma = line_nodes[j, l, a]
                            t = tL[a] if s == 0 else tR[a]
                            f = _flux(P, ma, Pf, fs, _gface(Gk, ma, nJk, fs, sig, j, dim), gamma)
                            for q in range(len(f)):
                                Fs[a, q] = f[q]
                                acc[q] += t * f[q]
                        for a in range(n):
                            ma = line_nodes[j, l, a]
                            t = tL[a] if s == 0 else tR[a]
                            c = 0.5 * sig * wp * t
                            for q in range(nv):
                                Rk[ma, q] += c * (Fs[a, q] - acc[q])


@njit(cache=True, inline="always")
def _matrix_dissipation_2d(a, b, vMm, vPe, nx, ny, gamma, out_row, scale):
    rho_log = _log_mean(a[0], b[0], a[4], b[4])
    beta_log = _log_mean(a[5], b[5], a[6], b[6])
    p_avg = 0.5 * (a[0] + b[0]) / (a[5] + b[5])
    u1 = 0.5 * (a[1] + b[1])
    u2 = 0.5 * (a[2] + b[2])
    u2avg = 2.0 * (u1 * u1 + u2 * u2) - 0.5 * (a[1] * a[1] + b[1] * b[1] + a[2] * a[2] + b[2] * b[2])
    unb = u1 * nx + u2 * ny
    ab = np.sqrt(gamma * p_avg / rho_log)
    h = gamma / (2.0 * (gamma - 1.0) * beta_log) + 0.5 * u2avg
    dv0 = vPe[0] - vMm[0]
    dv1 = vPe[1] - vMm[1]
    dv2 = vPe[2] - vMm[2]
    dv3 = vPe[3] - vMm[3]
    # columns of R (right eigenvectors): (1, u -/+ a n, h -/+ a u_n), (1, u, |u|^2/2), (0, n_perp, tangential)
    r10 = u1 - ab * nx
    r20 = u2 - ab * ny
    r30 = h - ab * unb
    r13 = u1 + ab * nx
    r23 = u2 + ab * ny
    r33 = h + ab * unb
    r31 = 0.5 * u2avg
    r32 = u1 * ny - u2 * nx
    c0 = (dv0 + r10 * dv1 + r20 * dv2 + r30 * dv3) * abs(unb - ab) * rho_log / (2.0 * gamma)
    c1 = (dv0 + u1 * dv1 + u2 * dv2 + r31 * dv3) * abs(unb) * rho_log * (gamma - 1.0) / gamma
    c2 = (ny * dv1 - nx * dv2 + r32 * dv3) * abs(unb) * p_avg
    c3 = (dv0 + r13 * dv1 + r23 * dv2 + r33 * dv3) * abs(unb + ab) * rho_log / (2.0 * gamma)
    out_row[0] -= scale * (c0 + c1 + c3)
    out_row[1] -= scale * (r10 * c0 + u1 * c1 + ny * c2 + r13 * c3)
    out_row[2] -= scale * (r20 * c0 + u2 * c1 - nx * c2 + r23 * c3)
    out_row[3] -= scale * (r30 * c0 + r31 * c1 + r32 * c2 + r33 * c3)


@njit(cache=True, fastmath=True)
def _surface_kernel(dim, primM, uM, vM, ext, bslot, primB, uB, vB, nJ, Jf, diss, gamma, out):
    M = primM.shape[0]
    d = nJ.shape[1]
    nv = d + 2
    for m in range(M):
        e = ext[m]
        if e >= 0:
            primP = primM
            uP = uM
            vP = vM
        else:
            primP = primB
            uP = uB
            vP = vB
            e = bslot[m]
        f = _flux(primM, m, primP, e, _row(nJ, m, dim), gamma)
        for q in range(len(f)):
            out[m, q] = f[q]
        if diss == DISS_NONE:
            continue
        a = primM[m]
        b = primP[e]
        jf = Jf[m]
        if diss == DISS_LF:
            unM = 0.0
            unP = 0.0
            for i in range(d):
                unM += a[1 + i] * nJ[m, i]
                unP += b[1 + i] * nJ[m, i]
            lamM = abs(unM) / jf + np.sqrt(gamma * a[d + 1] / a[0])
            lamP = abs(unP) / jf + np.sqrt(gamma * b[d + 1] / b[0])
            lam = lamM if lamM > lamP else lamP
            for q in range(nv):
                out[m, q] -= 0.5 * lam * jf * (uP[e, q] - uM[m, q])
        else:
            _matrix_dissipation_2d(a, b, vM[m], vP[e], nJ[m, 0] / jf, nJ[m, 1] / jf, gamma,
                                   out[m], 0.5 * jf)


@njit(cache=True)
def _ec_flux(dim, a, b, g, gamma, f):
    fv = _flux(a.reshape(1, -1), 0, b.reshape(1, -1), 0, _row(g.reshape(1, -1), 0, dim), gamma)
    for q in range(len(fv)):
        f[q] = fv[q]


def ec_flux(a, b, g, gamma, f):
    """f = sum_i g_i f^i_S(a, b) for single primitive records a, b (length d+5)."""
    g = np.asarray(g, float)
    d = len(g)
    _ec_flux(_dim(d), a, b, g, gamma, f)


def volume_kernel(prim, primf, G, nJ, line_nodes, line_faces, wperp, S1, tL, tR, gauss, gamma, R):
    """Accumulate the flux-differencing volume term into R (K, Np, d+2).

    Implements sum_j [I; Vf]^T (QN^j o Ft^j) 1 with the contravariant two-point
    flux Ft^j(m, n) = sum_i (G_ij(m) + G_ij(n)) f^i_S(m, n); face-face entries are
    omitted (they cancel against the f(u_f) part of the surface term).
    """
    d = G.shape[2]
    _volume_kernel(_dim(d), prim, primf, G, nJ, line_nodes, line_faces, wperp, S1, tL, tR, gauss, gamma, R)


def surface_flux_kernel(primM, uM, vM, ext, bslot, primB, uB, vB, nJ, Jf, diss, gamma, out):
    """Scaled normal numerical flux sum_i nJ_i f*_i at every face point.

    Arrays are flattened over (element, face node): primitive records primM
    (M, d+5), states uM and entropy variables vM (M, d+2), nJ (M, d), Jf (M,).
    The exterior state of point m is row ext[m] of the same arrays, or row
    bslot[m] of the boundary arrays primB/uB/vB when ext[m] < 0.
    """
    d = nJ.shape[1]
    _surface_kernel(_dim(d), primM, uM, vM, ext, bslot, primB, uB, vB, nJ, Jf, diss, gamma, out)


@njit(cache=True)
def volume_prep(u, gamma, prim, v):
    """Primitive records and entropy variables for (M, d+2) states.

    Returns the first non-admissible row index, or -1.
    """
    d = u.shape[1] - 2
    for m in range(u.shape[0]):
        rho = u[m, 0]
        ke = 0.0
        for i in range(d):
            vi = u[m, 1 + i] / rho
            prim[m, 1 + i] = vi
            ke += vi * u[m, 1 + i]
        p = (gamma - 1.0) * (u[m, d + 1] - 0.5 * ke)
        if not (rho > 0.0 and p > 0.0):
            return m
        lr = np.log(rho)
        beta = rho / (2.0 * p)
        lb = np.log(beta)
        prim[m, 0] = rho
        prim[m, d + 1] = p
        prim[m, d + 2] = lr
        prim[m, d + 3] = beta
        prim[m, d + 4] = lb
        s = np.log(p) - gamma * lr
        bb = 2.0 * beta
        v[m, 0] = (gamma - s) / (gamma - 1.0) - 0.5 * bb * ke / rho
        for i in range(d):
            v[m, 1 + i] = bb * prim[m, 1 + i]
        v[m, d + 1] = -bb
    return -1


@njit(cache=True)
def entropy_to_conservative(v, gamma, u, prim):
    """Conservative states and primitive records from entropy variables.

    Returns the first row with an invalid entropy vector, or -1.
    """
    d = v.shape[1] - 2
    for m in range(v.shape[0]):
        bb = -v[m, d + 1]  # rho / p
        if not bb > 0.0:
            return m
        u2 = 0.0
        for i in range(d):
            vi = v[m, 1 + i] / bb
            prim[m, 1 + i] = vi
            u2 += vi * vi
        s = gamma - (gamma - 1.0) * (v[m, 0] + 0.5 * bb * u2)
        lr = -(np.log(bb) + s) / (gamma - 1.0)
        rho = np.exp(lr)
        p = rho / bb
        prim[m, 0] = rho
        prim[m, d + 1] = p
        prim[m, d + 2] = lr
        prim[m, d + 3] = 0.5 * bb
        prim[m, d + 4] = np.log(0.5 * bb)
        u[m, 0] = rho
        for i in range(d):
            u[m, 1 + i] = rho * prim[m, 1 + i]
        u[m, d + 1] = p / (gamma - 1.0) + 0.5 * rho * u2
    return -1


@njit(cache=True)
def lift_kernel(fw, line_nodes, line_faces, tL, tR, R):
    """R += Vf^T fw along every line, fw already weighted by face quadrature."""
    K = R.shape[0]
    nv = R.shape[2]
    d = line_nodes.shape[0]
    nl = line_nodes.shape[1]
    n = line_nodes.shape[2]
    for k in range(K):
        for j in range(d):
            for l in range(nl):
                fL = line_faces[j, l, 0]
                fR = line_faces[j, l, 1]
                for a in range(n):
                    ma = line_nodes[j, l, a]
                    for q in range(nv):
                        R[k, ma, q] += tL[a] * fw[k, fL, q] + tR[a] * fw[k, fR, q]


@njit(cache=True)
def face_interp_kernel(v, line_nodes, line_faces, tL, tR, out):
    """out = Vf v: values at the two ends of every line."""
    K = v.shape[0]
    nv = v.shape[2]
    d = line_nodes.shape[0]
    nl = line_nodes.shape[1]
    n = line_nodes.shape[2]
    for k in range(K):
        for j in range(d):
            for l in range(nl):
                fL = line_faces[j, l, 0]
                fR = line_faces[j, l, 1]
                for q in range(nv):
                    out[k, fL, q] = 0.0
                    out[k, fR, q] = 0.0
                for a in range(n):
                    ma = line_nodes[j, l, a]
                    for q in range(nv):
                        out[k, fL, q] += tL[a] * v[k, ma, q]
                        out[k, fR, q] += tR[a] * v[k, ma, q]

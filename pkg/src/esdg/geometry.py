"""Metric terms, Jacobians and scaled normals on mapped tensor-product elements.

``G[..., i, j] = J * d xhat_j / d x_i``.  Normals on a face with reference
normal direction ``j`` and sign ``sigma`` are ``nJ_i = sigma * G_ij``.
"""

from dataclasses import dataclass

import numpy as np

from .operators_1d import build_nodes, derivative_interpolation_matrix, interpolation_matrix
from .operators_nd import apply_along


class GeometryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ElementGeometry:
    G: np.ndarray        # (K, Np, d, d) at volume nodes
    J: np.ndarray        # (K, Np)
    G_face: np.ndarray   # (K, Nfp, d, d)
    nJ: np.ndarray       # (K, Nfp, d) scaled outward normals n_i J_f
    Jf: np.ndarray       # (K, Nfp)
    x: np.ndarray        # (K, Np, d) physical volume nodes
    x_face: np.ndarray   # (K, Nfp, d)

    @property
    def normals(self):
        return self.nJ / self.Jf[..., None]


def eval_lattice(coef, r, points, deriv=None):
    """Evaluate a tensor Lagrange interpolant on 1D nodes ``r`` at reference ``points``.

    ``coef`` has shape (K, n^d, ...) with direction 1 fastest; ``points`` is (P, d).
    With ``deriv=j`` the reference derivative along direction ``j`` is returned.
    """
    points = np.atleast_2d(points)
    d = points.shape[1]
    n = len(r)
    K = coef.shape[0]
    trailing = coef.shape[2:]
    t = coef.reshape((K,) + (n,) * d + (-1,))
    mats = []
    for j in range(d):
        if deriv == j:
            mats.append(derivative_interpolation_matrix(r, points[:, j]))
        else:
            mats.append(interpolation_matrix(r, points[:, j]))
    # contract the direction-1 axis (last node axis) first, keeping the point axis
    out = np.einsum("pa,k...ac->kp...c", mats[0], t)
    for j in range(1, d):
        out = np.einsum("pa,kp...ac->kp...c", mats[j], out)
    return out.reshape((K, points.shape[0]) + trailing)


def _cofactor(A):
    d = A.shape[-1]
    if d == 1:
        return np.ones_like(A), A[..., 0, 0]
    if d == 2:
        C = np.empty_like(A)
        C[..., 0, 0] = A[..., 1, 1]
        C[..., 0, 1] = -A[..., 1, 0]
        C[..., 1, 0] = -A[..., 0, 1]
        C[..., 1, 1] = A[..., 0, 0]
        return C, A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    C = np.empty_like(A)
    for i in range(3):
        for j in range(3):
            i1, i2 = (i + 1) % 3, (i + 2) % 3
            j1, j2 = (j + 1) % 3, (j + 2) % 3
            C[..., i, j] = A[..., i1, j1] * A[..., i2, j2] - A[..., i1, j2] * A[..., i2, j1]
    return C, np.einsum("...j,...j->...", A[..., 0, :], C[..., 0, :])


def mapping_jacobian(mesh, points):
    """A[k, p, i, j] = d x_i / d xhat_j of the geometric mapping."""
    r, _ = build_nodes(mesh.N_geo, "gll")
    cols = [eval_lattice(mesh.X, r, points, deriv=j) for j in range(mesh.d)]
    return np.stack(cols, axis=-1)


def _check_positive(J, what):
    bad = ~(J > 0)
    if np.any(bad):
        k, p = np.argwhere(bad)[0]
        raise GeometryError(f"non-positive Jacobian {J[k, p]:.6g} in element {k} at {what} point {p}")


def _finish(mesh, ops, G, J, G_face):
    _check_positive(J, "volume")
    rows = np.arange(ops.Nfp)
    nJ = ops.face_sign[None, :, None] * G_face[:, rows, :, ops.face_dir].transpose(1, 0, 2)
    Jf = np.linalg.norm(nJ, axis=-1)
    r, _ = build_nodes(mesh.N_geo, "gll")
    x = eval_lattice(mesh.X, r, ops.vol_ref)
    xf = eval_lattice(mesh.X, r, ops.face_ref)
    return ElementGeometry(G=G, J=J, G_face=G_face, nJ=nJ, Jf=Jf, x=x, x_face=xf)


def compute_geometry_direct(mesh, ops):
    """Metric terms from cofactors of the exact mapping derivatives."""
    A = mapping_jacobian(mesh, ops.vol_ref)
    G, J = _cofactor(A)
    Af = mapping_jacobian(mesh, ops.face_ref)
    G_face, _ = _cofactor(Af)
    return _finish(mesh, ops, G, J, G_face)


def curl_metric_lattice(mesh, N):
    """Conservative curl-form metrics on the degree-N GLL lattice (d = 3).

    G_{n, :} = -curl( I_N( X_l grad X_m ) ) with (n, m, l) cyclic.
    Returns (r, G) with G of shape (K, (N+1)^3, 3, 3).
    """
    if mesh.d != 3:
        raise GeometryError("curl metrics are three-dimensional")
    r, _ = build_nodes(N, "gll")
    from .operators_1d import differentiation_matrix

    D = differentiation_matrix(r)
    rg, _ = build_nodes(mesh.N_geo, "gll")
    idx = np.indices((N + 1,) * 3).reshape(3, -1).T[:, ::-1]
    Xl = eval_lattice(mesh.X, rg, r[idx])  # (K, n^3, 3)

    def grad(f):
        return np.stack([apply_along(D, f, j, 3) for j in range(3)], axis=-1)

    gX = [grad(Xl[..., c]) for c in range(3)]  # each (K, n^3, 3)
    K = Xl.shape[0]
    G = np.empty((K, Xl.shape[1], 3, 3))
    for nn in range(3):
        m, l = (nn + 1) % 3, (nn + 2) % 3
        W = Xl[..., l][..., None] * gX[m]  # I_N(X_l grad X_m), nodal values
        for i in range(3):
            a, b = (i + 1) % 3, (i + 2) % 3
            curl_i = apply_along(D, W[..., b], a, 3) - apply_along(D, W[..., a], b, 3)
            G[:, :, nn, i] = -curl_i
    return r, G


def compute_geometry_curl_3d(mesh, ops):
    r, Gl = curl_metric_lattice(mesh, ops.N)
    G = eval_lattice(Gl, r, ops.vol_ref)
    G_face = eval_lattice(Gl, r, ops.face_ref)
    _, J = _cofactor(mapping_jacobian(mesh, ops.vol_ref))
    return _finish(mesh, ops, G, J, G_face)


def compute_geometry(mesh, ops, method="auto"):
    """``method`` is 'direct', 'curl' or 'auto' (curl in 3D, direct otherwise)."""
    if mesh.N_geo > ops.N:
        raise GeometryError(f"N_geo={mesh.N_geo} exceeds the solution degree N={ops.N}")
    if method == "auto":
        method = "curl" if mesh.d == 3 else "direct"
    if method == "curl":
        return compute_geometry_curl_3d(mesh, ops)
    if method == "direct":
        return compute_geometry_direct(mesh, ops)
    raise GeometryError(f"unknown geometry method {method!r}")


def face_coordinates_mismatch(mesh, geo, ops):
    """Max distance between matching face nodes across all interior/periodic faces."""
    from .mesh import period_vector

    nf = ops.Nfp_face
    L = period_vector(mesh)
    worst = 0.0
    xf = geo.x_face.reshape(mesh.num_elements, 2 * mesh.d, nf, mesh.d)
    for f in range(2 * mesh.d):
        nb = mesh.neighbor[:, f]
        ok = nb >= 0
        mine = xf[ok, f]
        theirs = xf[nb[ok], mesh.neighbor_face[ok, f]]
        diff = mine - theirs
        if np.any(L > 0):
            diff = diff - np.round(diff / np.where(L > 0, L, 1.0)) * L
        if diff.size:
            worst = max(worst, float(np.abs(diff).max()))
    return worst


def normal_mismatch(mesh, geo, ops):
    """Max |nJ(minus side) + nJ(plus side)| over matching face nodes."""
    nf = ops.Nfp_face
    nJ = geo.nJ.reshape(mesh.num_elements, 2 * mesh.d, nf, mesh.d)
    worst = 0.0
    for f in range(2 * mesh.d):
        nb = mesh.neighbor[:, f]
        ok = nb >= 0
        s = nJ[ok, f] + nJ[nb[ok], mesh.neighbor_face[ok, f]]
        if s.size:
            worst = max(worst, float(np.abs(s).max()))
    return worst

"""Tensor-product reference operators and the general quadrature builder.

Volume nodes are ordered lexicographically with reference direction 1
fastest, so a nodal field on K elements reshapes (C order) to
``(K, n, ..., n)`` with the *last* node axis belonging to direction 1.

Faces are enumerated (-x1, +x1, -x2, +x2, -x3, +x3); nodes on a face are
ordered lexicographically in the remaining reference directions, lowest
direction fastest.  A face array for K elements has shape ``(K, Nfp, ...)``
with ``Nfp = 2 d n^(d-1)``.
"""

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable

import numpy as np

from .operators_1d import (
    ConfigurationError,
    NodeFamily,
    Operator1D,
    build_operator,
    decoupled_block,
)


def _node_axis(j, d, lead):
    return lead + (d - 1 - j)


def apply_along(A, u, j, d, lead=1):
    """Apply the 1D matrix ``A`` along reference direction ``j`` of a flat nodal field.

    ``u`` has shape ``lead_shape + (n**d,) + trailing``; the result replaces the
    direction-``j`` extent ``n`` with ``A.shape[0]``.
    """
    n = A.shape[1]
    lead_shape = u.shape[:lead]
    trailing = u.shape[lead + 1:]
    t = u.reshape(lead_shape + (n,) * d + trailing)
    ax = _node_axis(j, d, lead)
    t = np.moveaxis(np.tensordot(A, t, axes=([1], [ax])), 0, ax)
    return t.reshape(lead_shape + (-1,) + trailing)


def apply_tensor(mats, u, d, lead=1):
    """Apply one 1D matrix per direction (a Kronecker product) to a flat nodal field.

    The matrices may be rectangular, e.g. interpolation to another point set.
    """
    lead_shape = u.shape[:lead]
    trailing = u.shape[lead + 1:]
    t = u.reshape(lead_shape + tuple(m.shape[1] for m in reversed(mats)) + trailing)
    for j in range(d):
        ax = _node_axis(j, d, lead)
        t = np.moveaxis(np.tensordot(mats[j], t, axes=([1], [ax])), 0, ax)
    return t.reshape(lead_shape + (-1,) + trailing)


def kron_dense(mats):
    """Dense Kronecker matrix equivalent to ``apply_tensor(mats, .)`` (direction 1 fastest)."""
    return reduce(np.kron, list(reversed(mats)))


@dataclass(frozen=True, eq=False)
class TensorOperators:
    d: int
    N: int
    family: NodeFamily
    op: Operator1D
    w_vol: np.ndarray        # (Np,) tensor volume weights
    w_face: np.ndarray       # (Nfp,) face quadrature weights
    face_dir: np.ndarray     # (Nfp,) reference direction normal to the face
    face_sign: np.ndarray    # (Nfp,) -1 on "left" faces, +1 on "right" faces
    line_nodes: np.ndarray   # (d, n^(d-1), n) volume node indices along each line
    line_faces: np.ndarray   # (d, n^(d-1), 2) face node index at each line end
    vol_ref: np.ndarray      # (Np, d) reference coordinates of volume nodes
    face_ref: np.ndarray     # (Nfp, d) reference coordinates of face nodes

    @property
    def n(self):
        return self.N + 1

    @property
    def Np(self):
        return self.n ** self.d

    @property
    def Nfp_face(self):
        return self.n ** (self.d - 1)

    @property
    def Nfp(self):
        return 2 * self.d * self.Nfp_face

    def B(self, i):
        """Diagonal of the reference boundary matrix for direction ``i`` (length Nfp)."""
        return np.where(self.face_dir == i, self.face_sign * self.w_face, 0.0)

    # matrix-free applications -------------------------------------------------

    def differentiate(self, u, j, lead=1):
        return apply_along(self.op.D, u, j, self.d, lead)

    def interp_faces(self, u, lead=1):
        """Volume nodal field -> values at all face nodes (shape ``(.., Nfp, ..)``)."""
        d, n = self.d, self.n
        lead_shape = u.shape[:lead]
        trailing = u.shape[lead + 1:]
        t = u.reshape(lead_shape + (n,) * d + trailing)
        out = []
        for j in range(d):
            ax = _node_axis(j, d, lead)
            vf = np.tensordot(self.op.Vf, t, axes=([1], [ax]))  # (2, lead, rest, trailing)
            for s in range(2):
                out.append(vf[s].reshape(lead_shape + (self.Nfp_face,) + trailing))
        return np.concatenate(out, axis=lead)

    def lift_faces(self, f, lead=1):
        """Transpose of :meth:`interp_faces`: face values -> volume nodal field."""
        d, n = self.d, self.n
        lead_shape = f.shape[:lead]
        trailing = f.shape[lead + 1:]
        nf = self.Nfp_face
        out = np.zeros(lead_shape + (n,) * d + trailing)
        for j in range(d):
            ax = _node_axis(j, d, lead)
            for s in range(2):
                k = 2 * j + s
                fs = np.take(f, np.arange(k * nf, (k + 1) * nf), axis=lead)
                fs = fs.reshape(lead_shape + (n,) * (d - 1) + trailing)
                contrib = np.multiply.outer(self.op.Vf[s], fs)  # (n, lead, rest, trailing)
                out += np.moveaxis(contrib, 0, ax)
        return out.reshape(lead_shape + (-1,) + trailing)

    # dense forms (verification and small reference solvers only) -------------

    def dense_D(self, j):
        mats = [np.eye(self.n)] * self.d
        mats[j] = self.op.D
        return kron_dense(mats)

    def dense_Vf(self):
        return self.interp_faces(np.eye(self.Np)[None])[0]

    def dense_Q(self, j):
        return self.w_vol[:, None] * self.dense_D(j)

    def dense_QN(self, j):
        return decoupled_block(self.dense_Q(j), self.dense_Vf(), np.diag(self.B(j)))


def build_tensor_ops(d, N, family):
    if d not in (1, 2, 3):
        raise ConfigurationError(f"unsupported dimension {d}")
    family = NodeFamily.parse(family)
    op = build_operator(N, family)
    n = N + 1
    x, w = op.x, op.w

    # multi-index of each volume node, column j = index in direction j
    idx = np.indices((n,) * d).reshape(d, -1).T[:, ::-1]
    w_vol = np.prod(w[idx], axis=1)
    vol_ref = x[idx]

    nf = n ** (d - 1)
    tang = np.indices((n,) * (d - 1)).reshape(d - 1, -1).T[:, ::-1] if d > 1 else np.zeros((1, 0), int)
    w_face, face_dir, face_sign, face_ref = [], [], [], []
    for j in range(d):
        others = [i for i in range(d) if i != j]
        wt = np.prod(w[tang], axis=1) if d > 1 else np.ones(1)
        for s, sign in enumerate((-1.0, 1.0)):
            w_face.append(wt)
            face_dir.append(np.full(nf, j))
            face_sign.append(np.full(nf, sign))
            ref = np.zeros((nf, d))
            ref[:, j] = sign
            for c, i in enumerate(others):
                ref[:, i] = x[tang[:, c]]
            face_ref.append(ref)

    flat = np.arange(n ** d).reshape((n,) * d)  # axes: dir d-1 ... dir 0
    line_nodes = np.zeros((d, nf, n), dtype=np.int64)
    line_faces = np.zeros((d, nf, 2), dtype=np.int64)
    for j in range(d):
        ax = d - 1 - j
        lines = np.moveaxis(flat, ax, -1).reshape(nf, n)
        line_nodes[j] = lines
        line_faces[j, :, 0] = 2 * j * nf + np.arange(nf)
        line_faces[j, :, 1] = (2 * j + 1) * nf + np.arange(nf)

    return TensorOperators(
        d=d, N=int(N), family=family, op=op,
        w_vol=w_vol, w_face=np.concatenate(w_face),
        face_dir=np.concatenate(face_dir), face_sign=np.concatenate(face_sign),
        line_nodes=line_nodes, line_faces=line_faces,
        vol_ref=vol_ref, face_ref=np.concatenate(face_ref),
    )


# --------------------------------------------------------------------------
# general basis / quadrature decoupled operators


class BuildError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GeneralQuadratureOps:
    Vq: np.ndarray
    Vf: np.ndarray
    w: np.ndarray
    wf: np.ndarray
    normals: np.ndarray      # (Nqf, d) reference outward normals at face points
    M: np.ndarray
    Pq: np.ndarray
    Q: list = field(default_factory=list)
    QN: list = field(default_factory=list)

    @property
    def d(self):
        return self.normals.shape[1]

    def boundary_block(self, i):
        nq = len(self.w)
        nf = len(self.wf)
        blk = np.zeros((nq + nf, nq + nf))
        blk[nq:, nq:] = np.diag(self.wf * self.normals[:, i])
        return blk


def build_general_quadrature_ops(basis: Callable, basis_grad: Callable,
                                 vol_points, vol_weights,
                                 face_points, face_weights, face_normals):
    """Decoupled SBP operators for an arbitrary basis and quadrature pair.

    ``basis(points) -> (npts, Np)`` evaluates the basis; ``basis_grad(points)``
    returns a list of d such matrices (one per reference direction).
    """
    vol_points = np.atleast_2d(np.asarray(vol_points, float).T).T
    face_points = np.atleast_2d(np.asarray(face_points, float).T).T
    w = np.asarray(vol_weights, float)
    wf = np.asarray(face_weights, float)
    nrm = np.asarray(face_normals, float).reshape(len(wf), -1)

    Vq = basis(vol_points)
    Vf = basis(face_points)
    M = Vq.T @ (w[:, None] * Vq)
    if np.linalg.cond(M) > 1e12:
        raise BuildError("mass matrix is singular or numerically rank deficient")
    Pq = np.linalg.solve(M, Vq.T * w[None, :])

    E = Vf @ Pq
    Qs, QNs = [], []
    for i, Vgrad in enumerate(basis_grad(vol_points)):
        Dmodal = Pq @ Vgrad            # coefficients -> derivative coefficients
        Dq = Vq @ Dmodal @ Pq
        Q = w[:, None] * Dq
        Bi = np.diag(wf * nrm[:, i])
        Qs.append(Q)
        QNs.append(decoupled_block(Q, E, Bi))
    return GeneralQuadratureOps(Vq=Vq, Vf=Vf, w=w, wf=wf, normals=nrm, M=M, Pq=Pq, Q=Qs, QN=QNs)


def legendre_basis_1d(N):
    """Orthonormal Legendre basis of degree N on [-1, 1] (value and derivative evaluators)."""
    from numpy.polynomial import legendre as L

    scale = np.sqrt((2 * np.arange(N + 1) + 1) / 2.0)

    def basis(pts):
        return L.legvander(np.asarray(pts)[:, 0], N) * scale

    def grad(pts):
        x = np.asarray(pts)[:, 0]
        cols = [L.legval(x, L.legder(np.eye(N + 1)[k])) for k in range(N + 1)]
        return [np.stack(cols, axis=1) * scale]

    return basis, grad


def lagrange_basis_1d(nodes):
    from .operators_1d import derivative_interpolation_matrix, interpolation_matrix

    nodes = np.asarray(nodes, float)

    def basis(pts):
        return interpolation_matrix(nodes, np.asarray(pts)[:, 0])

    def grad(pts):
        return [derivative_interpolation_matrix(nodes, np.asarray(pts)[:, 0])]

    return basis, grad


def interval_faces():
    """Face points/weights/normals for the 1D reference interval."""
    return np.array([[-1.0], [1.0]]), np.array([1.0, 1.0]), np.array([[-1.0], [1.0]])

"""Semi-discrete entropy-stable collocation DG right-hand side.

Per element ``k`` the scheme reads

    W J du/dt + sum_j [I; Vf]^T (QN^j o Ft^j) 1 + Vf^T W_f (f*_n - f_n(u_f)) = 0

with the contravariant two-point flux ``Ft^j(m, n) = sum_i (G_ij(m) + G_ij(n)) f^i_S``,
which is the split-form curved operator applied to the flux-differencing
matrices.  The face-face block of the Hadamard product equals ``W_f f_n(u_f)``
and cancels against the consistency part of the surface term, so only the
numerical flux ``f*_n`` is lifted.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .euler import (
    GAMMA,
    AdmissibilityError,
    conservative,
    entropy,
    flux_ec,
    to_entropy_vars,
    wall_mirror_state,
)
from .geometry import compute_geometry
from .mesh import BoundaryTag
from .operators_1d import ConfigurationError, NodeFamily
from .operators_nd import build_tensor_ops

DISSIPATION = {
    "ec": _kernels.DISS_NONE,
    "none": _kernels.DISS_NONE,
    "lax-friedrichs": _kernels.DISS_LF,
    "lf": _kernels.DISS_LF,
    "matrix": _kernels.DISS_MATRIX,
}


def parse_dissipation(name, d):
    key = str(name).strip().lower()
    if key not in DISSIPATION:
        raise ConfigurationError(f"unknown flux option {name!r}")
    if DISSIPATION[key] == _kernels.DISS_MATRIX and d != 2:
        raise ConfigurationError("matrix dissipation is only available in 2D")
    return DISSIPATION[key]


def flux_calls_per_element(d, N, family):
    """Logical two-point flux evaluations per element per RHS (symmetric pairs counted twice)."""
    n = N + 1
    lines = d * n ** (d - 1)
    per_line = n * n + (4 * n if NodeFamily.parse(family) is NodeFamily.GAUSS else 0)
    return lines * per_line


def exterior_index(mesh, ops):
    """Flat index (into K*Nfp face arrays) of the matching exterior node; -1 on boundaries."""
    K = mesh.num_elements
    nf = ops.Nfp_face
    Nfp = ops.Nfp
    ext = np.full((K, Nfp), -1, dtype=np.int64)
    tag = np.zeros((K, Nfp), dtype=np.int64)
    a = np.arange(nf)
    for f in range(2 * mesh.d):
        nb = mesh.neighbor[:, f]
        nbf = mesh.neighbor_face[:, f]
        sl = slice(f * nf, (f + 1) * nf)
        idx = nb[:, None] * Nfp + nbf[:, None] * nf + a[None, :]
        ext[:, sl] = np.where(nb[:, None] >= 0, idx, -1)
        tag[:, sl] = mesh.face_tag[:, f][:, None]
    return ext, tag


def apply_boundary(uM, tag, nJ, ext_values=None, x_face=None, t=0.0, boundary_state=None):
    """Exterior states at face points.

    ``ext_values`` already holds gathered neighbour values at interior/periodic
    points; wall points get the mirror state and prescribed points the analytic
    state ``boundary_state(x_face, t)``.
    """
    uP = np.array(uM if ext_values is None else ext_values, float, copy=True)
    wall = tag == BoundaryTag.WALL
    if np.any(wall):
        uP[wall] = wall_mirror_state(uM[wall], nJ[wall])
    pres = tag == BoundaryTag.PRESCRIBED
    if np.any(pres):
        if boundary_state is None:
            raise ConfigurationError("prescribed boundary without a boundary state")
        uP[pres] = boundary_state(x_face[pres], t)
    return uP


@dataclass
class FaceStates:
    v_f: np.ndarray      # (K, Nfp, nv) interpolated entropy variables
    u_f: np.ndarray      # (K, Nfp, nv) entropy-projected conservative variables
    fstar: np.ndarray    # (K, Nfp, nv) scaled normal numerical flux


@dataclass
class Solver:
    """Decoupled-SBP flux-differencing DG discretization on a structured mesh."""

    mesh: object
    N: int
    family: NodeFamily
    dissipation: str = "lax-friedrichs"
    gamma: float = GAMMA
    geometry_method: str = "auto"
    boundary_state: Optional[Callable] = None
    ops: object = field(init=False)
    geo: object = field(init=False)
    flux_calls: int = field(init=False, default=0)
    rhs_evals: int = field(init=False, default=0)
    last_faces: Optional[FaceStates] = field(init=False, default=None)

    def __post_init__(self):
        self.family = NodeFamily.parse(self.family)
        d = self.mesh.d
        self._diss = parse_dissipation(self.dissipation, d)
        self.ops = build_tensor_ops(d, self.N, self.family)
        self.geo = compute_geometry(self.mesh, self.ops, self.geometry_method)
        ops = self.ops
        op = ops.op
        self._gauss = self.family is NodeFamily.GAUSS
        self._S1 = np.ascontiguousarray(op.S)
        self._tL = np.ascontiguousarray(op.tL)
        self._tR = np.ascontiguousarray(op.tR)
        self._wperp = np.ascontiguousarray(ops.w_vol[ops.line_nodes[:, :, 0]] / op.w[0])
        self._line_nodes = np.ascontiguousarray(ops.line_nodes)
        self._line_faces = np.ascontiguousarray(ops.line_faces)
        self._G = np.ascontiguousarray(self.geo.G)
        self._nJ = np.ascontiguousarray(self.geo.nJ)
        self._mass = ops.w_vol[None, :] * self.geo.J
        self._ext, self._tag = exterior_index(self.mesh, ops)
        self._ext_flat = self._ext.ravel()
        self._bnd_rows = np.flatnonzero(self._ext_flat < 0)
        self._bnd_tag = self._tag.ravel()[self._bnd_rows]
        self._bslot = np.full(self._ext.size, -1, dtype=np.int64)
        self._bslot[self._bnd_rows] = np.arange(len(self._bnd_rows))
        self._neg_inv_mass = (-1.0 / self._mass)[..., None]
        self._calls_per_rhs = self.mesh.num_elements * flux_calls_per_element(d, self.N, self.family)

    # ------------------------------------------------------------------
    @property
    def d(self):
        return self.mesh.d

    @property
    def nv(self):
        return self.d + 2

    @property
    def x(self):
        return self.geo.x

    @property
    def mass(self):
        """Diagonal mass W J per element, shape (K, Np)."""
        return self._mass

    def project(self, fn, t=0.0):
        """Nodal samples of an analytic state ``fn(x, t)``."""
        return fn(self.geo.x, t)

    def _prim(self, u):
        flat = u.reshape(-1, u.shape[-1])
        out = np.empty((flat.shape[0], self.d + 5))
        _kernels.prim_records(flat, self.gamma, out)
        return out

    def _volume_prep(self, u):
        K, Np, nv = u.shape
        prim = np.empty((K, Np, self.d + 5))
        v = np.empty((K, Np, nv))
        bad = _kernels.volume_prep(u.reshape(-1, nv), self.gamma, prim.reshape(-1, self.d + 5),
                                   v.reshape(-1, nv))
        if bad >= 0:
            raise AdmissibilityError(f"non-admissible state in element {bad // Np}, node {bad % Np}")
        return prim, v

    def _interp_faces(self, v):
        out = np.empty((v.shape[0], self.ops.Nfp, v.shape[2]))
        _kernels.face_interp_kernel(v, self._line_nodes, self._line_faces, self._tL, self._tR, out)
        return out

    def entropy_project_faces(self, u, v=None):
        """Face entropy variables v_f = Vf v(u) and projected states u(v_f).

        Returns ``(v_f, u_f, prim_f)``.  For GLL nodes the projection is the
        exact trace of the nodal values.
        """
        if v is None:
            _, v = self._volume_prep(np.ascontiguousarray(u, dtype=float))
        K, Nfp, nv = u.shape[0], self.ops.Nfp, self.nv
        vf = self._interp_faces(v)
        primf = np.empty((K, Nfp, self.d + 5))
        if self.family is NodeFamily.GLL:
            uf = self._interp_faces(u)
            _kernels.prim_records(uf.reshape(-1, nv), self.gamma, primf.reshape(-1, self.d + 5))
        else:
            uf = np.empty((K, Nfp, nv))
            bad = _kernels.entropy_to_conservative(vf.reshape(-1, nv), self.gamma, uf.reshape(-1, nv),
                                                   primf.reshape(-1, self.d + 5))
            if bad >= 0:
                raise AdmissibilityError(
                    f"entropy-projected state not admissible in element {bad // Nfp}, face node {bad % Nfp}")
        return vf, uf, primf

    def face_states(self, u, t=0.0, v=None):
        K, Nfp, nv = self.mesh.num_elements, self.ops.Nfp, self.nv
        vf, uf, primf = self.entropy_project_faces(u, v)
        flat = uf.reshape(K * Nfp, nv)
        vflat = vf.reshape(K * Nfp, nv)
        primflat = primf.reshape(K * Nfp, -1)
        bnd = self._bnd_rows
        if len(bnd):
            uB = apply_boundary(flat[bnd], self._bnd_tag, self._nJ.reshape(-1, self.d)[bnd], None,
                                self.geo.x_face.reshape(-1, self.d)[bnd], t, self.boundary_state)
            primB = self._prim(uB)
            vB = to_entropy_vars(uB, self.gamma)
        else:
            uB, primB, vB = flat[:1], primflat[:1], vflat[:1]
        fstar = np.empty((K * Nfp, nv))
        _kernels.surface_flux_kernel(primflat, flat, vflat, self._ext_flat, self._bslot, primB, uB, vB,
                                     self._nJ.reshape(-1, self.d), self.geo.Jf.ravel(),
                                     self._diss, self.gamma, fstar)
        return FaceStates(v_f=vf, u_f=uf, fstar=fstar.reshape(K, Nfp, nv)), primf

    def rhs(self, u, t=0.0):
        """du/dt for the nodal state ``u`` of shape (K, Np, d+2)."""
        u = np.ascontiguousarray(u, dtype=float)
        prim, v = self._volume_prep(u)
        faces, primf = self.face_states(u, t, v)
        R = np.zeros(u.shape)
        _kernels.volume_kernel(prim, primf, self._G, self._nJ, self._line_nodes, self._line_faces,
                               self._wperp, self._S1, self._tL, self._tR, self._gauss, self.gamma, R)
        fw = self.ops.w_face[None, :, None] * faces.fstar
        _kernels.lift_kernel(fw, self._line_nodes, self._line_faces, self._tL, self._tR, R)
        self.last_faces = faces
        self.flux_calls += self._calls_per_rhs
        self.rhs_evals += 1
        R *= self._neg_inv_mass
        return R

    __call__ = rhs

    # diagnostics tied to the discretization -------------------------------
    def integrate(self, f):
        """Quadrature sum of W J f over all elements (f has shape (K, Np, ...))."""
        return np.einsum("kp,kp...->...", self._mass, f)

    def boundary_entropy_flux(self, faces=None):
        """Per-point w_f (v_f^T f*_n - psi_n(u_f)) on domain-boundary face points; zero elsewhere."""
        faces = faces or self.last_faces
        vdotf = np.sum(faces.v_f * faces.fstar, axis=-1)
        psi_n = np.sum(self._nJ * faces.u_f[..., 1:-1], axis=-1)
        out = self.ops.w_face[None, :] * (vdotf - psi_n)
        return np.where(self._ext < 0, out, 0.0)

    def entropy_balance_residual(self, u, du=None, t=0.0):
        """sum_k v^T W J du/dt + boundary entropy flux (zero for an entropy conservative scheme)."""
        if du is None:
            du = self.rhs(u, t)
        v = to_entropy_vars(u, self.gamma)
        rate = float(self.integrate(np.sum(v * du, axis=-1)))
        return rate + float(self.boundary_entropy_flux().sum())

    def wall_entropy_inequality(self, faces=None):
        """max over wall face points of psi_n - v^T f*_n (nonpositive for a stable wall)."""
        faces = faces or self.last_faces
        wall = self._tag == BoundaryTag.WALL
        if not np.any(wall):
            return -np.inf
        vdotf = np.sum(faces.v_f * faces.fstar, axis=-1)
        psi_n = np.sum(self._nJ * faces.u_f[..., 1:-1], axis=-1)
        return float(np.max((psi_n - vdotf)[wall]))

    def total_entropy(self, u):
        return float(self.integrate(entropy(u, self.gamma)))

    def conserved_totals(self, u):
        return self.integrate(u)


def rhs_dense_gsbp_1d(u, solver):
    """Reference 1D scheme with dense GSBP interface couplings (no entropy projection).

    Assembles the global Q_h from S on the diagonal and 1/2 t_R t_L^T couplings
    between neighbours (wrapping for periodic meshes, 1/2 B_h at the ends
    otherwise) and returns du/dt = -(W_h J)^{-1} 2 (Q_h o F_S) 1.
    """
    mesh = solver.mesh
    if mesh.d != 1:
        raise ConfigurationError("the dense GSBP reference scheme is one-dimensional")
    Qh, Bh = dense_gsbp_global_operator(solver)
    uh = u.reshape(-1, u.shape[-1])
    M = uh.shape[0]
    F = flux_ec(uh[:, None, :], uh[None, :, :], 0, solver.gamma)
    r = 2.0 * np.einsum("ij,ijc->ic", Qh, F)
    return (-r / solver.mass.reshape(M, 1)).reshape(u.shape)


def dense_gsbp_global_operator(solver):
    op = solver.ops.op
    K = solver.mesh.num_elements
    n = op.n
    tL, tR = op.tL, op.tR
    Qh = np.zeros((K * n, K * n))
    Bh = np.zeros((K * n, K * n))
    periodic = solver.mesh.periodic[0]
    for k in range(K):
        sl = slice(k * n, (k + 1) * n)
        Qh[sl, sl] = op.S
        if k + 1 < K or periodic:
            kn = (k + 1) % K
            sn = slice(kn * n, (kn + 1) * n)
            Qh[sl, sn] += 0.5 * np.outer(tR, tL)
            Qh[sn, sl] -= 0.5 * np.outer(tL, tR)
    if not periodic:
        Bh[:n, :n] = -np.outer(tL, tL)
        Bh[-n:, -n:] = np.outer(tR, tR)
        Qh += 0.5 * Bh
    return Qh, Bh


def dense_gsbp_entropy_residual(u, solver):
    """d/dt 1^T W_h S + v^T (B_h o F_S) 1 - 1^T B_h psi for the dense reference scheme."""
    Qh, Bh = dense_gsbp_global_operator(solver)
    du = rhs_dense_gsbp_1d(u, solver)
    uh = u.reshape(-1, u.shape[-1])
    v = to_entropy_vars(uh, solver.gamma)
    rate = np.sum(solver.mass.reshape(-1) * np.sum(v * du.reshape(uh.shape), axis=-1))
    F = flux_ec(uh[:, None, :], uh[None, :, :], 0, solver.gamma)
    bterm = np.sum(v * np.einsum("ij,ijc->ic", Bh, F))
    psi = uh[:, 1]
    return float(rate + bterm - Bh.sum(axis=1) @ psi)


def constant_state(solver, rho=1.0, vel=None, p=1.0):
    d = solver.d
    vel = np.zeros(d) if vel is None else np.asarray(vel, float)
    shape = solver.geo.x.shape[:-1]
    return conservative(np.full(shape, rho), np.broadcast_to(vel, shape + (d,)), np.full(shape, p), solver.gamma)

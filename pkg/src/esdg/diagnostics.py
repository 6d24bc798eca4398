"""Error norms, integral monitors and the operation-count cost model."""

from dataclasses import dataclass

import numpy as np

from .geometry import _cofactor, eval_lattice, mapping_jacobian
from .operators_1d import build_nodes, interpolation_matrix
from .operators_nd import apply_tensor


@dataclass
class QuadratureData:
    """Tensor Gauss rule mapped onto every element."""

    interp: np.ndarray   # (nq, n) 1D interpolation from solution nodes
    w: np.ndarray        # (nq^d,) reference weights
    x: np.ndarray        # (K, nq^d, d) physical points
    J: np.ndarray        # (K, nq^d)

    def values(self, u, d):
        """Evaluate nodal fields (K, Np, ...) at the quadrature points."""
        return apply_tensor([self.interp] * d, u, d)


def gauss_quadrature_data(solver, npts):
    d = solver.d
    xq, wq = build_nodes(npts - 1, "gauss")
    idx = np.indices((npts,) * d).reshape(d, -1).T[:, ::-1]
    ref = xq[idx]
    w = np.prod(wq[idx], axis=1)
    rg, _ = build_nodes(solver.mesh.N_geo, "gll")
    x = eval_lattice(solver.mesh.X, rg, ref)
    _, J = _cofactor(mapping_jacobian(solver.mesh, ref))
    return QuadratureData(interp=interpolation_matrix(solver.ops.op.x, xq), w=w, x=x, J=J)


def l2_error(solver, u, exact, t, quad=None):
    """Per-field L2 errors and their root-sum-square, using an (N+2)-point Gauss rule."""
    quad = quad or gauss_quadrature_data(solver, solver.N + 2)
    uq = quad.values(u, solver.d)
    ue = exact(quad.x, t)
    err2 = np.einsum("q,kq,kqc->c", quad.w, quad.J, (uq - ue) ** 2)
    per_field = np.sqrt(err2)
    return per_field, float(np.sqrt(np.sum(err2)))


def kinetic_energy(solver, u, quad=None):
    """kappa = (1/|Omega|) int rho |u|^2 with an (N+1)-point Gauss rule."""
    quad = quad or gauss_quadrature_data(solver, solver.N + 1)
    uq = quad.values(u, solver.d)
    m = uq[..., 1:-1]
    integrand = np.sum(m * m, axis=-1) / uq[..., 0]
    vol = np.einsum("q,kq->", quad.w, quad.J)
    return float(np.einsum("q,kq,kq->", quad.w, quad.J, integrand) / vol)


def dissipation_rate(times, kappa):
    """Centered-difference estimate of -d kappa/dt at interior samples."""
    t = np.asarray(times, float)
    k = np.asarray(kappa, float)
    if len(t) < 3:
        return np.zeros(0), np.zeros(0)
    return t[1:-1], -(k[2:] - k[:-2]) / (t[2:] - t[:-2])


def entropy_total(solver, u):
    return solver.total_entropy(u)


def conserved_totals(solver, u):
    return solver.conserved_totals(u)


@dataclass
class DiagnosticRecord:
    t: float
    entropy: float
    totals: np.ndarray
    kappa: float
    flux_calls: int


SCHEMES = ("gll", "gauss", "staggered")


def cost_model(N, scheme, d=3):
    """(two-point flux evaluations, 1D matrix operations) per element in 3D."""
    if d != 3:
        raise ValueError("the cost model is stated for hexahedra (d = 3)")
    scheme = str(scheme).lower()
    n1, n2 = N + 1, N + 2
    if scheme == "gll":
        return 3 * n1 ** 4, 3 * n1 ** 4
    if scheme == "gauss":
        c = 3 * n1 ** 4 + 12 * n1 ** 3
        return c, c
    if scheme == "staggered":
        return 3 * n2 ** 4, 3 * n2 ** 4 + 6 * n2 * n1 ** 3
    raise ValueError(f"unknown scheme {scheme!r}")

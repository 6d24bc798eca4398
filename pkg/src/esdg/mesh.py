"""Structured quadrilateral/hexahedral meshes with periodic or tagged boundaries.

Elements are numbered with direction 1 fastest.  Each element carries the
physical positions of a degree ``N_geo`` Gauss-Lobatto lattice (same node
ordering as the volume nodes of :mod:`esdg.operators_nd`); the mapping from
the reference cube is the tensor Lagrange interpolant of these positions.

Neighbouring structured elements share face orientation, so the node
permutation between matching faces is the identity.
"""

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

from .operators_1d import ConfigurationError, build_nodes


class BoundaryTag(IntEnum):
    INTERIOR = 0   # interior face or periodic pairing
    WALL = 1
    PRESCRIBED = 2

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"periodic": cls.INTERIOR, "interior": cls.INTERIOR, "wall": cls.WALL,
                   "prescribed": cls.PRESCRIBED, "inflow": cls.PRESCRIBED, "dirichlet": cls.PRESCRIBED}
        if key not in aliases:
            raise ConfigurationError(f"unknown boundary tag {value!r}")
        return aliases[key]


@dataclass(frozen=True, eq=False)
class Mesh:
    d: int
    K: tuple
    lo: np.ndarray
    hi: np.ndarray
    N_geo: int
    X: np.ndarray            # (Kel, (N_geo+1)^d, d) geometric lattice positions
    neighbor: np.ndarray     # (Kel, 2d) neighbour element, -1 on a boundary
    neighbor_face: np.ndarray  # (Kel, 2d) matching face index on the neighbour
    face_tag: np.ndarray     # (Kel, 2d) BoundaryTag values
    side_tags: tuple         # (2d,) tag per domain side (-x1, +x1, -x2, ...)

    @property
    def num_elements(self):
        return int(np.prod(self.K))

    @property
    def edge(self):
        return (self.hi - self.lo) / np.asarray(self.K)

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    @property
    def periodic(self):
        return tuple(self.side_tags[2 * j] == BoundaryTag.INTERIOR for j in range(self.d))


def _lattice_offsets(d, N_geo):
    r, _ = build_nodes(N_geo, "gll")
    n = N_geo + 1
    idx = np.indices((n,) * d).reshape(d, -1).T[:, ::-1]
    return r[idx]  # (n^d, d) reference coordinates, direction 1 fastest


def build_cartesian_mesh(d, box, K, boundary="periodic", N_geo=1):
    """Uniform mesh of ``box = [(a_1, b_1), ...]`` with ``K = (K_1, ...)`` elements.

    ``boundary`` is one tag for every side or a sequence of 2d tags ordered
    (-x1, +x1, -x2, +x2, -x3, +x3).  A direction is periodic when both of its
    sides are tagged periodic.
    """
    if d not in (1, 2, 3):
        raise ConfigurationError(f"unsupported dimension {d}")
    K = tuple(int(k) for k in np.atleast_1d(K))
    box = np.asarray(box, float).reshape(d, 2)
    if len(K) != d or min(K) < 1:
        raise ConfigurationError(f"bad element counts {K} for d={d}")
    if np.any(box[:, 1] <= box[:, 0]):
        raise ConfigurationError("degenerate box")
    if N_geo < 1:
        raise ConfigurationError("N_geo must be >= 1")
    if isinstance(boundary, (str, BoundaryTag)):
        boundary = [boundary] * (2 * d)
    tags = tuple(BoundaryTag.parse(b) for b in boundary)
    if len(tags) != 2 * d:
        raise ConfigurationError("need one boundary tag per domain side")
    for j in range(d):
        if (tags[2 * j] == BoundaryTag.INTERIOR) != (tags[2 * j + 1] == BoundaryTag.INTERIOR):
            raise ConfigurationError(f"direction {j + 1} is periodic on one side only")

    lo, hi = box[:, 0], box[:, 1]
    h = (hi - lo) / np.asarray(K)
    Kel = int(np.prod(K))
    eidx = np.indices(K[::-1]).reshape(d, -1).T[:, ::-1]  # (Kel, d), direction 1 fastest
    ref = _lattice_offsets(d, N_geo)
    corner = lo + eidx * h
    X = corner[:, None, :] + 0.5 * (ref[None, :, :] + 1.0) * h

    strides = np.cumprod((1,) + K[:-1])
    neighbor = np.full((Kel, 2 * d), -1, dtype=np.int64)
    neighbor_face = np.zeros((Kel, 2 * d), dtype=np.int64)
    face_tag = np.zeros((Kel, 2 * d), dtype=np.int64)
    for j in range(d):
        for s, step in enumerate((-1, 1)):
            f = 2 * j + s
            nb = eidx[:, j] + step
            inside = (nb >= 0) & (nb < K[j])
            wrap = nb % K[j]
            nbr = (eidx.copy())
            nbr[:, j] = wrap
            flat = nbr @ strides
            periodic = tags[f] == BoundaryTag.INTERIOR
            ok = inside | periodic
            neighbor[:, f] = np.where(ok, flat, -1)
            neighbor_face[:, f] = 2 * j + (1 - s)
            face_tag[:, f] = np.where(inside, BoundaryTag.INTERIOR, tags[f])
    return Mesh(d=d, K=K, lo=lo.copy(), hi=hi.copy(), N_geo=int(N_geo), X=X,
                neighbor=neighbor, neighbor_face=neighbor_face, face_tag=face_tag,
                side_tags=tags)


def with_geometry_degree(mesh, N_geo):
    """Re-sample an (unwarped, affine) mesh on a lattice of degree ``N_geo``."""
    box = np.stack([mesh.lo, mesh.hi], axis=1)
    return build_cartesian_mesh(mesh.d, box, mesh.K, mesh.side_tags, N_geo)


def map_nodes(mesh, fn):
    """Apply a pointwise map ``fn(X) -> X'`` to all geometric lattice nodes."""
    X = fn(mesh.X.copy())
    return replace(mesh, X=np.asarray(X, float))


def warp_2d(X, alpha, lo, hi):
    """Sequential 2D warp: x from (x, y), then y from (x_new, y)."""
    Lx, Ly = hi - lo
    xc, yc = 0.5 * (lo + hi)
    x, y = X[..., 0], X[..., 1]
    xt = x + Lx * alpha * np.cos(np.pi / Lx * (x - xc)) * np.cos(3 * np.pi / Ly * (y - yc))
    yt = y + Ly * alpha * np.sin(4 * np.pi / Lx * (xt - xc)) * np.cos(np.pi / Ly * (y - yc))
    return np.stack([xt, yt], axis=-1)


def warp_mesh_2d(mesh, alpha):
    if mesh.d != 2:
        raise ConfigurationError("warp_mesh_2d needs a 2D mesh")
    if not 0.0 <= alpha <= 0.125:
        raise ConfigurationError("alpha must lie in [0, 1/8]")
    return map_nodes(mesh, lambda X: warp_2d(X, alpha, mesh.lo, mesh.hi))


def warp_3d(X, lo, hi):
    """Sequential 3D warp: y first, then x (using new y), then z (using new x, y)."""
    L = hi - lo
    c = 0.5 * (lo + hi)
    x, y, z = X[..., 0], X[..., 1], X[..., 2]
    cz = np.cos(np.pi * (z - c[2]) / L[2])
    yt = y + L[1] / 8 * np.cos(3 * np.pi * (x - c[0]) / L[0]) * np.cos(np.pi * (y - c[1]) / L[1]) * cz
    xt = x + L[0] / 8 * np.cos(np.pi * (x - c[0]) / L[0]) * np.sin(4 * np.pi * (yt - c[1]) / L[1]) * cz
    zt = z + L[2] / 8 * np.cos(np.pi * (xt - c[0]) / L[0]) * np.cos(2 * np.pi * (yt - c[1]) / L[1]) * cz
    return np.stack([xt, yt, zt], axis=-1)


def warp_mesh_3d(mesh):
    if mesh.d != 3:
        raise ConfigurationError("warp_mesh_3d needs a 3D mesh")
    return map_nodes(mesh, lambda X: warp_3d(X, mesh.lo, mesh.hi))


def warp_tgv(X):
    """Shift every coordinate by 1/2 sin(x) sin(y) sin(z)."""
    s = 0.5 * np.sin(X[..., 0]) * np.sin(X[..., 1]) * np.sin(X[..., 2])
    return X + s[..., None]


def warp_mesh_tgv(mesh):
    if mesh.d != 3:
        raise ConfigurationError("the Taylor-Green warp needs a 3D mesh")
    return map_nodes(mesh, warp_tgv)


def period_vector(mesh):
    """Domain lengths in periodic directions (0 elsewhere)."""
    return np.where(mesh.periodic, mesh.hi - mesh.lo, 0.0)


def dump_mesh(mesh, path):
    """Plain-text dump: one line per element with its lattice coordinates."""
    with open(path, "w") as fh:
        for e in range(mesh.num_elements):
            fh.write(" ".join(f"{v:.17g}" for v in mesh.X[e].ravel()) + "\n")

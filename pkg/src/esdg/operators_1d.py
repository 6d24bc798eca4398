"""One-dimensional quadrature rules and summation-by-parts operators.

Everything here is built for a single node family (Gauss or Gauss-Lobatto)
and polynomial degree ``N``.  Volume node values are ordered left to right;
"face" quantities are ordered (left endpoint, right endpoint).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ConfigurationError(ValueError):
    pass


class NodeFamily(str, Enum):
    GAUSS = "gauss"
    GLL = "gll"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("gauss", "gl", "gauss-legendre"):
            return cls.GAUSS
        if key in ("gll", "lobatto", "gauss-lobatto"):
            return cls.GLL
        raise ConfigurationError(f"unknown node family {value!r}")

    def exactness(self, N):
        """Highest polynomial degree integrated exactly by the (N+1)-point rule."""
        return 2 * N + 1 if self is NodeFamily.GAUSS else 2 * N - 1


def _legendre(n, x):
    """Return (P_n(x), P_n'(x)) by the three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # derivative from P_{n-1}, P_n; valid away from x = +-1
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def _newton(f, x, tol=1e-15, maxiter=100):
    for _ in range(maxiter):
        dx = f(x)
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    return x


def build_nodes(N, family):
    """Quadrature nodes and weights of the (N+1)-point rule on [-1, 1]."""
    family = NodeFamily.parse(family)
    N = int(N)
    if family is NodeFamily.GAUSS:
        if N < 0:
            raise ConfigurationError("Gauss rules need N >= 0")
        n = N + 1
        if n == 1:
            return np.array([0.0]), np.array([2.0])
        k = np.arange(n)
        x = -np.cos((2 * k + 1) * np.pi / (2 * n))

        def step(x):
            p, dp = _legendre(n, x)
            return p / dp

        x = _newton(step, x)
        _, dp = _legendre(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        return x, w

    if N < 1:
        raise ConfigurationError("Gauss-Lobatto rules need N >= 1")
    if N == 1:
        return np.array([-1.0, 1.0]), np.array([1.0, 1.0])
    # interior nodes are the roots of P_N'; Newton on q = (1-x^2) P_N'
    k = np.arange(1, N)
    x = -np.cos(np.pi * k / N)

    def step(x):
        p, dp = _legendre(N, x)
        # (1-x^2) P_N'' = 2x P_N' - N(N+1) P_N
        ddp = (2 * x * dp - N * (N + 1) * p) / (1.0 - x * x)
        return dp / ddp

    x = _newton(step, x)
    x = np.concatenate(([-1.0], x, [1.0]))
    p, _ = _legendre(N, x)
    w = 2.0 / (N * (N + 1) * p * p)
    return x, w


def barycentric_weights(x):
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def interpolation_matrix(x, points):
    """Matrix evaluating the Lagrange interpolant on nodes ``x`` at ``points``."""
    x = np.asarray(x, dtype=float)
    points = np.atleast_1d(np.asarray(points, dtype=float))
    lam = barycentric_weights(x)
    diff = points[:, None] - x[None, :]
    exact = np.isclose(diff, 0.0, rtol=0.0, atol=1e-14)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = lam[None, :] / diff
        V = t / t.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    V[rows] = exact[rows].astype(float)
    return V


def differentiation_matrix(x):
    """Nodal differentiation matrix D_ij = l_j'(x_i)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n == 1:
        return np.zeros((1, 1))
    lam = barycentric_weights(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (lam[None, :] / lam[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def derivative_interpolation_matrix(x, points):
    """Matrix evaluating the derivative of the interpolant at ``points``."""
    return interpolation_matrix(x, points) @ differentiation_matrix(x)


@dataclass(frozen=True, eq=False)
class Operator1D:
    N: int
    family: NodeFamily
    x: np.ndarray
    w: np.ndarray
    D: np.ndarray
    Vf: np.ndarray
    Q: np.ndarray
    B: np.ndarray
    S: np.ndarray
    QN: np.ndarray

    @property
    def W(self):
        return np.diag(self.w)

    @property
    def tL(self):
        return self.Vf[0]

    @property
    def tR(self):
        return self.Vf[1]

    @property
    def n(self):
        return self.N + 1

    def residuals(self):
        """Max-abs residuals of the algebraic identities the operator must satisfy."""
        n = self.n
        E = self.Vf.T @ self.B @ self.Vf
        blk = np.zeros((n + 2, n + 2))
        blk[n:, n:] = self.B
        return {
            "sbp": np.abs(self.Q + self.Q.T - E).max(),
            "skew": np.abs(self.S + self.S.T).max(),
            "decoupled_sbp": np.abs(self.QN + self.QN.T - blk).max(),
            "Q1": np.abs(self.Q.sum(axis=1)).max(),
            "Vf1": np.abs(self.Vf.sum(axis=1) - 1.0).max(),
        }


def decoupled_block(Q, Vf, B):
    """Assemble [[Q - 1/2 Vf'BVf, 1/2 Vf'B], [-1/2 BVf, 1/2 B]]."""
    return np.block([
        [Q - 0.5 * Vf.T @ B @ Vf, 0.5 * Vf.T @ B],
        [-0.5 * B @ Vf, 0.5 * B],
    ])


def build_operator(N, family):
    family = NodeFamily.parse(family)
    x, w = build_nodes(N, family)
    D = differentiation_matrix(x)
    if family is NodeFamily.GLL:
        Vf = np.zeros((2, len(x)))
        Vf[0, 0] = Vf[1, -1] = 1.0
    else:
        Vf = interpolation_matrix(x, [-1.0, 1.0])
    B = np.diag([-1.0, 1.0])
    Q = w[:, None] * D
    S = Q - 0.5 * Vf.T @ B @ Vf
    QN = decoupled_block(Q, Vf, B)
    for a in (x, w, D, Vf, Q, B, S, QN):
        a.setflags(write=False)
    return Operator1D(int(N), family, x, w, D, Vf, Q, B, S, QN)


def decoupled_derivative(op, fN, gN):
    """Approximate f dg/dx at the volume nodes from volume + endpoint samples.

    ``fN`` and ``gN`` hold N+1 volume values followed by the left and right
    endpoint values.  Solves ``W u = [I; Vf]^T diag(fN) QN gN``.
    """
    fN = np.asarray(fN, dtype=float)
    gN = np.asarray(gN, dtype=float)
    n = op.n
    if fN.shape != (n + 2,) or gN.shape != (n + 2,):
        raise ValueError(f"expected vectors of length {n + 2}, got {fN.shape} and {gN.shape}")
    r = fN * (op.QN @ gN)
    return (r[:n] + op.Vf.T @ r[n:]) / op.w


def gsbp_derivative(op, g):
    return op.D @ np.asarray(g, dtype=float)

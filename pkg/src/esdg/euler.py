"""Compressible Euler state algebra.

Conservative states are arrays whose last axis holds ``(rho, rho*u_1..rho*u_d, E)``,
so ``d`` is inferred as ``u.shape[-1] - 2``.  All functions broadcast over the
leading axes.  The entropy is ``S = -rho*s/(gamma-1)`` with ``s = log(p/rho^gamma)``.
"""

import numpy as np

GAMMA = 1.4


class AdmissibilityError(ArithmeticError):
    """Raised when a state has nonpositive density or pressure."""


def _dim(u):
    return u.shape[-1] - 2


def pressure(u, gamma=GAMMA):
    rho = u[..., 0]
    m = u[..., 1:-1]
    return (gamma - 1.0) * (u[..., -1] - 0.5 * np.sum(m * m, axis=-1) / rho)


def primitive(u, gamma=GAMMA):
    """Return ``(rho, velocity[..., d], p)``."""
    rho = u[..., 0]
    vel = u[..., 1:-1] / rho[..., None]
    return rho, vel, pressure(u, gamma)


def conservative(rho, vel, p, gamma=GAMMA):
    rho = np.asarray(rho, float)
    vel = np.asarray(vel, float)
    p = np.asarray(p, float)
    E = p / (gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=-1)
    return np.concatenate([rho[..., None], rho[..., None] * vel, E[..., None]], axis=-1)


def check_admissible(u, gamma=GAMMA, what="state"):
    rho = u[..., 0]
    p = pressure(u, gamma)
    bad = ~((rho > 0) & (p > 0))
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        raise AdmissibilityError(f"non-admissible {what} at index {tuple(int(i) for i in idx)}: "
                                 f"rho={rho[tuple(idx)]:.6g}, p={p[tuple(idx)]:.6g}")


def physical_entropy(u, gamma=GAMMA):
    rho, _, p = primitive(u, gamma)
    return np.log(p) - gamma * np.log(rho)


def entropy(u, gamma=GAMMA):
    check_admissible(u, gamma)
    return -u[..., 0] * physical_entropy(u, gamma) / (gamma - 1.0)


def to_entropy_vars(u, gamma=GAMMA):
    """v = dS/du."""
    check_admissible(u, gamma)
    rho, vel, p = primitive(u, gamma)
    s = np.log(p) - gamma * np.log(rho)
    b = rho / p
    v1 = (gamma - s) / (gamma - 1.0) - 0.5 * b * np.sum(vel * vel, axis=-1)
    return np.concatenate([v1[..., None], b[..., None] * vel, -b[..., None]], axis=-1)


def from_entropy_vars(v, gamma=GAMMA):
    """Inverse of :func:`to_entropy_vars`."""
    b = -v[..., -1]  # rho / p
    if np.any(~(b > 0)):
        raise AdmissibilityError("entropy variables with nonnegative last component")
    vel = v[..., 1:-1] / b[..., None]
    s = gamma - (gamma - 1.0) * (v[..., 0] + 0.5 * b * np.sum(vel * vel, axis=-1))
    rho = np.exp(-(np.log(b) + s) / (gamma - 1.0))
    return conservative(rho, vel, rho / b, gamma)


def euler_flux(u, i, gamma=GAMMA):
    """Physical flux in coordinate direction ``i`` (0-based)."""
    rho, vel, p = primitive(u, gamma)
    ui = vel[..., i]
    f = u * ui[..., None]
    f[..., 1 + i] += p
    f[..., -1] += p * ui
    return f


def normal_flux(u, n, gamma=GAMMA):
    """Physical flux dotted with the (not necessarily unit) vector ``n``."""
    n = np.asarray(n, float)
    rho, vel, p = primitive(u, gamma)
    un = np.sum(vel * n, axis=-1)
    f = u * un[..., None]
    f[..., 1:-1] += p[..., None] * n
    f[..., -1] += p * un
    return f


def entropy_potential(u, i, gamma=GAMMA):
    """psi_i = rho*u_i (closed form of v^T f_i - u_i S)."""
    return u[..., 1 + i]


def entropy_potential_from_definition(u, i, gamma=GAMMA):
    v = to_entropy_vars(u, gamma)
    return np.sum(v * euler_flux(u, i, gamma), axis=-1) - u[..., 1 + i] / u[..., 0] * entropy(u, gamma)


def log_mean(a, b):
    """Logarithmic mean (b - a)/(log b - log a), stable as a -> b."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise ValueError("log_mean requires positive arguments")
    # order the arguments so the result is bitwise symmetric
    a, b = np.minimum(a, b), np.maximum(a, b)
    xi = b / a
    f = (xi - 1.0) / (xi + 1.0)
    w = f * f
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (a + b) * f / np.log(xi)
    series = (a + b) / (2.0 * (1.0 + w / 3.0 + w * w / 5.0 + w * w * w / 7.0))
    out = np.where(w < 1e-4, series, direct)
    return out[()] if out.ndim == 0 else out


def _ec_averages(uL, uR, gamma):
    rL, vL, pL = primitive(uL, gamma)
    rR, vR, pR = primitive(uR, gamma)
    bL = rL / (2 * pL)
    bR = rR / (2 * pR)
    rho_log = log_mean(rL, rR)
    beta_log = log_mean(bL, bR)
    vavg = 0.5 * (vL + vR)
    p_avg = 0.5 * (rL + rR) / (bL + bR)
    u2_avg = 2.0 * np.sum(vavg * vavg, axis=-1) - 0.5 * np.sum(vL * vL + vR * vR, axis=-1)
    E_avg = rho_log / (2.0 * (gamma - 1.0) * beta_log) + 0.5 * rho_log * u2_avg
    return rho_log, beta_log, vavg, p_avg, u2_avg, E_avg


def flux_ec(uL, uR, n, gamma=GAMMA):
    """Chandrashekar entropy-conservative flux.

    ``n`` is either an integer coordinate direction or a vector; for a vector the
    result is ``sum_i n_i f^i_S``.
    """
    uL = np.asarray(uL, float)
    uR = np.asarray(uR, float)
    d = _dim(uL)
    if np.ndim(n) == 0:
        e = np.zeros(d)
        e[int(n)] = 1.0
        n = e
    n = np.asarray(n, float)
    rho_log, _, vavg, p_avg, _, E_avg = _ec_averages(uL, uR, gamma)
    un = np.sum(vavg * n, axis=-1)
    mass = rho_log * un
    f = np.empty(np.broadcast_shapes(uL.shape, uR.shape))
    f[..., 0] = mass
    f[..., 1:-1] = mass[..., None] * vavg + p_avg[..., None] * n
    f[..., -1] = (E_avg + p_avg) * un
    return f


def sound_speed(u, gamma=GAMMA):
    rho, _, p = primitive(u, gamma)
    return np.sqrt(gamma * p / rho)


def max_wave_speed(u, gamma=GAMMA):
    rho, vel, p = primitive(u, gamma)
    return np.max(np.sqrt(np.sum(vel * vel, axis=-1)) + np.sqrt(gamma * p / rho))


def _unit(n):
    n = np.asarray(n, float)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def dissipation_lax_friedrichs(uM, uP, n, gamma=GAMMA):
    """Penalty lambda/2 (uP - uM), lambda = max |u.nhat| + c over both states."""
    nh = _unit(n)
    lam = np.maximum(_lf_speed(uM, nh, gamma), _lf_speed(uP, nh, gamma))
    return 0.5 * lam[..., None] * (uP - uM)


def _lf_speed(u, nh, gamma):
    rho, vel, p = primitive(u, gamma)
    return np.abs(np.sum(vel * nh, axis=-1)) + np.sqrt(gamma * p / rho)


def matrix_dissipation_factors(uM, uP, n, gamma=GAMMA):
    """Eigen-decomposition factors ``(R, D)`` of the 2D matrix dissipation term."""
    if _dim(uM) != 2:
        raise NotImplementedError("matrix dissipation is only defined for d = 2")
    nx, ny = np.moveaxis(_unit(n), -1, 0)
    rho_log, beta_log, vavg, p_avg, u2_avg, _ = _ec_averages(uM, uP, gamma)
    u1, u2 = vavg[..., 0], vavg[..., 1]
    unb = u1 * nx + u2 * ny
    a = np.sqrt(gamma * p_avg / rho_log)
    h = gamma / (2.0 * (gamma - 1.0) * beta_log) + 0.5 * u2_avg
    shape = unb.shape
    R = np.empty(shape + (4, 4))
    one = np.ones(shape)
    R[..., 0, :] = np.stack([one, one, 0 * one, one], axis=-1)
    R[..., 1, :] = np.stack([u1 - a * nx, u1, ny * one, u1 + a * nx], axis=-1)
    R[..., 2, :] = np.stack([u2 - a * ny, u2, -nx * one, u2 + a * ny], axis=-1)
    R[..., 3, :] = np.stack([h - a * unb, 0.5 * u2_avg, u1 * ny - u2 * nx, h + a * unb], axis=-1)
    D = np.stack([
        np.abs(unb - a) * rho_log / (2 * gamma),
        np.abs(unb) * rho_log * (gamma - 1) / gamma,
        np.abs(unb) * p_avg,
        np.abs(unb + a) * rho_log / (2 * gamma),
    ], axis=-1)
    return R, D


def dissipation_matrix(uM, uP, n, gamma=GAMMA):
    """Penalty 1/2 R D R^T (v(uP) - v(uM))."""
    R, D = matrix_dissipation_factors(uM, uP, n, gamma)
    dv = to_entropy_vars(uP, gamma) - to_entropy_vars(uM, gamma)
    c = np.einsum("...ji,...j->...i", R, dv) * D
    return 0.5 * np.einsum("...ij,...j->...i", R, c)


def wall_mirror_state(u, n):
    """Reflect the normal velocity component; density, pressure and |u| unchanged."""
    nh = _unit(n)
    m = u[..., 1:-1]
    mn = np.sum(m * nh, axis=-1, keepdims=True)
    out = np.array(u, float, copy=True)
    out[..., 1:-1] = m - 2.0 * mn * nh
    return out


def rankine_hugoniot_right_state(rho_L, u_L, p_L, Ms, gamma=GAMMA):
    """Downstream (rho, u, p) for a normal shock of Mach ``Ms`` from the upstream state."""
    r = (2.0 + (gamma - 1.0) * Ms * Ms) / ((gamma + 1.0) * Ms * Ms)
    pr = 1.0 + 2.0 * gamma / (gamma + 1.0) * (Ms * Ms - 1.0)
    return rho_L / r, u_L * r, p_L * pr

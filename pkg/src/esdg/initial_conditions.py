"""Analytic states for the benchmark problems.

Every function maps points ``x[..., d]`` and a time ``t`` to conservative
states ``u[..., d+2]``.
"""

import numpy as np

from .euler import GAMMA, conservative, rankine_hugoniot_right_state
from .operators_1d import ConfigurationError


def isentropic_vortex_2d(x, t=0.0, x0=5.0, y0=0.0, beta=5.0, gamma=GAMMA):
    X = x[..., 0] - x0 - t
    Y = x[..., 1] - y0
    e = np.exp(1.0 - (X * X + Y * Y))
    rho = (1.0 - 0.5 * (gamma - 1.0) * (beta * e) ** 2 / (8.0 * gamma * np.pi ** 2)) ** (1.0 / (gamma - 1.0))
    u1 = 1.0 - beta / (2 * np.pi) * e * Y
    u2 = beta / (2 * np.pi) * e * X
    return conservative(rho, np.stack([u1, u2], axis=-1), rho ** gamma, gamma)


def isentropic_vortex_3d(x, t=0.0, c1=7.5, c2=7.5, p0=1.0 / GAMMA, Pi_max=0.4,
                         background=1.0, gamma=GAMMA):
    """Vortex extruded in z and carried in +y at speed ``background``."""
    r1 = -(x[..., 1] - c2 - background * t)
    r2 = x[..., 0] - c1
    Pi = Pi_max * np.exp(0.5 * (1.0 - r1 * r1 - r2 * r2))
    f = 1.0 - 0.5 * (gamma - 1.0) * Pi * Pi
    rho = f ** (1.0 / (gamma - 1.0))
    p = p0 * f ** (gamma / (gamma - 1.0))
    vel = np.stack([Pi * r1, Pi * r2 + background, np.zeros_like(Pi)], axis=-1)
    return conservative(rho, vel, p, gamma)


def shock_states(Ms=1.1, gamma=GAMMA):
    """Upstream and downstream (rho, u, v, p) of the stationary shock."""
    left = (1.0, np.sqrt(gamma), 0.0, 1.0)
    rR, uR, pR = rankine_hugoniot_right_state(left[0], left[1], left[3], Ms, gamma)
    return left, (rR, uR, 0.0, pR)


def shock_vortex(x, t=0.0, Ms=1.1, x_shock=0.5, xc=0.25, yc=0.5, eps=0.3, alpha=0.204,
                 rc=0.05, gamma=GAMMA):
    """Stationary shock plus an isentropic vortex upstream (initial data only)."""
    left, right = shock_states(Ms, gamma)
    upstream = x[..., 0] < x_shock
    rho_s = np.where(upstream, left[0], right[0])
    u_s = np.where(upstream, left[1], right[1])
    p_s = np.where(upstream, left[3], right[3])
    dx = x[..., 0] - xc
    dy = x[..., 1] - yc
    tau = np.sqrt(dx * dx + dy * dy) / rc
    vtheta = eps * tau * np.exp(alpha * (1.0 - tau * tau))
    theta = np.arctan2(dy, dx)
    du = vtheta * np.sin(theta)
    dv = -vtheta * np.cos(theta)
    TL = left[3] / left[0]
    dT = -(gamma - 1.0) * eps ** 2 * np.exp(2 * alpha * (1.0 - tau * tau)) / (4.0 * alpha * gamma)
    ratio = ((TL + dT) / TL) ** (1.0 / (gamma - 1.0))
    return conservative(rho_s * ratio, np.stack([u_s + du, dv], axis=-1), p_s * ratio, gamma)


def taylor_green(x, t=0.0, gamma=GAMMA):
    X, Y, Z = x[..., 0], x[..., 1], x[..., 2]
    rho = np.ones_like(X)
    p = 100.0 / gamma + (np.cos(2 * X) + np.cos(2 * Y)) * (2.0 + np.cos(2 * Z)) / 16.0
    vel = np.stack([np.sin(X) * np.cos(Y) * np.cos(Z), -np.cos(X) * np.sin(Y) * np.cos(Z), 0 * X], axis=-1)
    return conservative(rho, vel, p, gamma)


def uniform_state(x, t=0.0, rho=1.0, vel=None, p=1.0, gamma=GAMMA):
    d = x.shape[-1]
    vel = np.zeros(d) if vel is None else np.asarray(vel, float)
    shape = x.shape[:-1]
    return conservative(np.full(shape, rho), np.broadcast_to(vel, shape + (d,)), np.full(shape, p), gamma)


INITIAL_CONDITIONS = {
    "vortex2d": isentropic_vortex_2d,
    "vortex3d": isentropic_vortex_3d,
    "shockvortex": shock_vortex,
    "tgv": taylor_green,
    "uniform": uniform_state,
}


def initial_condition(name, x, t=0.0, **kw):
    try:
        fn = INITIAL_CONDITIONS[name]
    except KeyError:
        raise ConfigurationError(f"unknown experiment {name!r}") from None
    return fn(x, t, **kw)

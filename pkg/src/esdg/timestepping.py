"""Low-storage explicit Runge-Kutta integration and the CFL timestep estimate."""

import math
from dataclasses import dataclass

import numpy as np

from .operators_1d import NodeFamily

# Carpenter & Kennedy (1994), five-stage fourth-order 2N-storage scheme.
RK4A = np.array([
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
])
RK4B = np.array([
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
])
RK4C = np.array([
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
])


class IntegrationError(RuntimeError):
    pass


def trace_constant(d, N, family):
    if NodeFamily.parse(family) is NodeFamily.GLL:
        return d * N * (N + 1) / 2.0
    return d * (N + 1) * (N + 2) / 2.0


def mesh_scale(J, Jf):
    """h = 1 / (||1/J||_inf ||J_f||_inf)."""
    return 1.0 / (np.max(1.0 / J) * np.max(Jf))


@dataclass
class TimestepParams:
    cfl: float
    h: float
    C_N: float

    def dt(self, a):
        if not a > 0:
            raise IntegrationError(f"nonpositive wave speed estimate {a}")
        return self.cfl * self.h / (a * self.C_N)


def timestep_params(solver, cfl, family=NodeFamily.GAUSS):
    """Both node families use the Gauss trace constant unless ``family`` says otherwise."""
    return TimestepParams(cfl=cfl, h=mesh_scale(solver.geo.J, solver.geo.Jf),
                          C_N=trace_constant(solver.d, solver.N, family))


def lsrk45_step(rhs, u, t, dt, k=None):
    """One LSRK45 step; returns a new array (``u`` is not modified)."""
    u = np.array(u, float, copy=True)
    if k is None:
        k = np.zeros_like(u)
    else:
        k[...] = 0.0
    tmp = np.empty_like(u)
    for a, b, c in zip(RK4A, RK4B, RK4C):
        k *= a
        np.multiply(rhs(u, t + c * dt), dt, out=tmp)
        k += tmp
        np.multiply(k, b, out=tmp)
        u += tmp
    return u


def integrate(rhs, u0, t_final, dt, t0=0.0, output_times=(), callback=None, max_steps=None):
    """Advance ``u' = rhs(u, t)`` from ``t0`` to ``t_final``.

    ``dt`` is a number (fixed step) or a callable ``dt(u, t)`` evaluated every
    step.  Steps are clipped to land exactly on ``t_final`` and on each entry
    of ``output_times``, where ``callback(t, u)`` is invoked.  Returns
    ``(u, t, nsteps, dts)``.
    """
    u = np.array(u0, float, copy=True)
    t = float(t0)
    stops = sorted(float(s) for s in output_times if t0 < s < t_final) + [float(t_final)]
    dts = []
    nsteps = 0
    k = np.zeros_like(u)
    for stop in stops:
        while t < stop:
            h = dt(u, t) if callable(dt) else float(dt)
            if not (h > 0 and math.isfinite(h)):
                raise IntegrationError(f"invalid timestep {h} at t={t}, step {nsteps}")
            if t + h >= stop - 1e-13 * max(1.0, abs(stop)):
                h = stop - t
            u = lsrk45_step(rhs, u, t, h, k)
            nsteps += 1
            dts.append(h)
            t = stop if h == stop - t else t + h
            if not np.all(np.isfinite(u)):
                raise IntegrationError(f"non-finite state at t={t:.6g} (step {nsteps})")
            if max_steps is not None and nsteps >= max_steps:
                return u, t, nsteps, np.array(dts)
        if callback is not None:
            callback(t, u)
    return u, t, nsteps, np.array(dts)


def observed_order(errors, ratio=2.0):
    e = np.asarray(errors, float)
    return np.log(e[:-1] / e[1:]) / np.log(ratio)

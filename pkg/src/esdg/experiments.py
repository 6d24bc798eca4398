"""Experiment presets, problem assembly and time-series bookkeeping."""

import csv
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import initial_conditions as ics
from .diagnostics import SCHEMES, cost_model, dissipation_rate, gauss_quadrature_data, kinetic_energy, l2_error
from .euler import max_wave_speed
from .mesh import (
    build_cartesian_mesh,
    warp_mesh_2d,
    warp_mesh_3d,
    warp_mesh_tgv,
)
from .operators_1d import (
    ConfigurationError,
    NodeFamily,
    build_nodes,
    build_operator,
    decoupled_derivative,
    gsbp_derivative,
    interpolation_matrix,
)
from .operators_nd import build_tensor_ops
from .solver import Solver, parse_dissipation
from .timestepping import integrate, timestep_params

WARPS = {"none": 0.0, "light": 1.0 / 64, "moderate": 1.0 / 16, "heavy": 1.0 / 8}

EXPERIMENTS = ("derivative-demo", "vortex2d", "vortex3d", "shockvortex", "tgv", "operator-check", "cost-model")


@dataclass
class RunConfig:
    experiment: str = "vortex2d"
    d: int = 2
    N: int = 2
    family: str = "gauss"
    mesh: tuple = (16, 8)
    warp: str = "none"
    ngeo: str = "isoparametric"
    flux: str = "lax-friedrichs"
    cfl: float = 0.5
    t_final: float = 5.0
    output: str = "."
    output_interval: float = 0.0
    seed: int = 0
    fixed_dt: bool = False
    geometry: str = "auto"
    gamma: float = 1.4

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {self.experiment!r}")
        if self.d not in (1, 2, 3):
            raise ConfigurationError(f"unsupported dimension {self.d}")
        NodeFamily.parse(self.family)
        parse_dissipation(self.flux, self.d)
        if len(self.mesh) != self.d or min(self.mesh) < 1:
            raise ConfigurationError(f"mesh {self.mesh} does not match d={self.d}")
        if self.ngeo not in ("isoparametric", "subparametric"):
            raise ConfigurationError(f"unknown N_geo policy {self.ngeo!r}")
        warp_alpha(self.warp)
        if not (self.cfl > 0 and self.t_final > 0):
            raise ConfigurationError("cfl and t_final must be positive")
        return self


PRESETS = {
    "vortex2d": dict(d=2, N=2, mesh=(16, 8), flux="lax-friedrichs", cfl=0.5, t_final=5.0),
    "vortex3d": dict(d=3, N=2, mesh=(6, 8, 2), flux="lax-friedrichs", cfl=0.75, t_final=5.0),
    "shockvortex": dict(d=2, N=4, mesh=(100, 50), flux="matrix", cfl=1.5, t_final=0.7,
                        output_interval=0.05),
    "tgv": dict(d=3, N=3, mesh=(4, 4, 4), flux="lax-friedrichs", cfl=0.25, t_final=20.0,
                output_interval=0.1),
    "tgv-full": dict(d=3, N=7, mesh=(8, 8, 8), flux="lax-friedrichs", cfl=0.25, t_final=20.0,
                     output_interval=0.1),
}


def preset(name, **overrides):
    base = dict(PRESETS.get(name, {}))
    exp = "tgv" if name == "tgv-full" else name
    base.update(overrides)
    return RunConfig(experiment=exp, **base).validate()


def warp_alpha(warp):
    if isinstance(warp, (int, float)):
        return float(warp)
    key = str(warp).strip().lower()
    if key in WARPS:
        return WARPS[key]
    if key in ("curved", "tgv"):
        return key
    try:
        return float(key)
    except ValueError:
        raise ConfigurationError(f"unknown warp {warp!r}") from None


def geometry_degree(N, policy):
    return N if policy == "isoparametric" else N // 2 + 1


def parse_mesh(text):
    """'16x8' -> (16, 8)."""
    if isinstance(text, (tuple, list)):
        return tuple(int(k) for k in text)
    try:
        return tuple(int(k) for k in str(text).lower().split("x"))
    except ValueError:
        raise ConfigurationError(f"bad mesh spec {text!r}") from None


def build_problem(cfg):
    """Return ``(solver, u0, exact)``; ``exact`` is None without an analytic solution."""
    cfg.validate()
    Ng = geometry_degree(cfg.N, cfg.ngeo)
    gamma = cfg.gamma
    alpha = warp_alpha(cfg.warp)
    if cfg.experiment == "vortex2d":
        mesh = build_cartesian_mesh(2, [(0, 20), (-5, 5)], cfg.mesh, "periodic", Ng)
        if alpha:
            mesh = warp_mesh_2d(mesh, alpha)

        def exact(x, t):
            return ics.isentropic_vortex_2d(x, t, gamma=gamma)
    elif cfg.experiment == "vortex3d":
        mesh = build_cartesian_mesh(3, [(0, 15), (0, 20), (0, 5)], cfg.mesh, "periodic", Ng)
        if alpha:
            mesh = warp_mesh_3d(mesh)

        def exact(x, t):
            return ics.isentropic_vortex_3d(x, t, p0=1.0 / gamma, gamma=gamma)
    elif cfg.experiment == "shockvortex":
        mesh = build_cartesian_mesh(2, [(0, 2), (0, 1)], cfg.mesh,
                                    ["periodic", "periodic", "wall", "wall"], Ng)
        if alpha:
            mesh = warp_mesh_2d(mesh, alpha)
        exact = None
    elif cfg.experiment == "tgv":
        mesh = build_cartesian_mesh(3, [(-np.pi, np.pi)] * 3, cfg.mesh, "periodic", Ng)
        if alpha:
            mesh = warp_mesh_tgv(mesh)
        exact = None
    else:
        raise ConfigurationError(f"{cfg.experiment} is not a time-dependent experiment")
    solver = Solver(mesh, cfg.N, cfg.family, cfg.flux, gamma=gamma, geometry_method=cfg.geometry)
    if cfg.experiment == "shockvortex":
        u0 = solver.project(lambda x, t: ics.shock_vortex(x, t, gamma=gamma))
    elif cfg.experiment == "tgv":
        u0 = solver.project(lambda x, t: ics.taylor_green(x, t, gamma=gamma))
    else:
        u0 = solver.project(exact)
    return solver, u0, exact


@dataclass
class RunResult:
    config: RunConfig
    u: np.ndarray
    t: float
    steps: int
    errors: tuple = None          # (per-field, combined) when an exact solution exists
    series: list = field(default_factory=list)
    rate: tuple = None
    wall_max: float = -math.inf   # max of psi_n - v^T f*_n over wall faces and outputs
    flux_calls: int = 0


def run(cfg, progress=None):
    """Time-integrate a configured experiment and collect diagnostics.

    ``progress(record)`` is called with each diagnostic record (t, entropy,
    totals, kappa) as it is produced.
    """
    solver, u0, exact = build_problem(cfg)
    params = timestep_params(solver, cfg.cfl)
    if cfg.fixed_dt:
        dt = params.dt(max_wave_speed(u0, cfg.gamma))
    else:
        def dt(u, t):
            return params.dt(max_wave_speed(u, cfg.gamma))
    kq = gauss_quadrature_data(solver, cfg.N + 1)
    series = []
    state = {"wall": -math.inf}

    def record(t, u):
        solver.rhs(u, t)  # refresh face data for the wall monitor
        state["wall"] = max(state["wall"], solver.wall_entropy_inequality())
        rec = dict(t=t, entropy=solver.total_entropy(u), totals=solver.conserved_totals(u).copy(),
                   kappa=kinetic_energy(solver, u, kq))
        series.append(rec)
        if progress:
            progress(rec)

    record(0.0, u0)
    outs = ()
    if cfg.output_interval > 0:
        nout = int(round(cfg.t_final / cfg.output_interval))
        outs = [cfg.output_interval * i for i in range(1, nout)]
    u, t, steps, _ = integrate(solver.rhs, u0, cfg.t_final, dt, output_times=outs, callback=record)
    errors = l2_error(solver, u, exact, t) if exact is not None else None
    times = [r["t"] for r in series]
    rate = dissipation_rate(times, [r["kappa"] for r in series])
    return RunResult(config=cfg, u=u, t=t, steps=steps, errors=errors, series=series, rate=rate,
                     wall_max=state["wall"], flux_calls=solver.flux_calls)


# operator-level experiments ------------------------------------------------

def gaussian(x):
    return np.exp(-4.0 * x * x)


def gaussian_derivative(x):
    return -8.0 * x * np.exp(-4.0 * x * x)


def derivative_demo(N, family="gauss", nquad=50):
    """L2 errors of the decoupled and GSBP derivatives of exp(-4x^2) on [-1, 1].

    Nodal derivative values are extended by their degree-N interpolant and
    compared with the exact derivative using a high order Gauss rule.
    """
    op = build_operator(N, family)
    g_vol = gaussian(op.x)
    gN = np.concatenate([g_vol, gaussian(np.array([-1.0, 1.0]))])
    du_dec = decoupled_derivative(op, np.ones(op.n + 2), gN)
    du_gsbp = gsbp_derivative(op, g_vol)
    xq, wq = build_nodes(nquad - 1, "gauss")
    Vq = interpolation_matrix(op.x, xq)
    exact = gaussian_derivative(xq)

    def err(nodal):
        return float(np.sqrt(np.sum(wq * (Vq @ nodal - exact) ** 2)))

    return err(du_dec), err(du_gsbp)


def operator_check(Ns, families=("gauss", "gll"), dims=(1, 2, 3), nd_max=4):
    """Residuals of the 1D identities for every N plus tensor-product checks for small N.

    Returns a list of ``(family, N, name, residual)`` tuples.
    """
    rows = []
    for fam in families:
        for N in Ns:
            op = build_operator(N, fam)
            for name, r in op.residuals().items():
                rows.append((fam, N, name, float(r)))
            if N > nd_max:
                continue
            for d in dims:
                ops = build_tensor_ops(d, N, fam)
                Vf = ops.dense_Vf()
                worst_sbp = worst_dec = worst_q1 = 0.0
                for j in range(d):
                    Q = ops.dense_Q(j)
                    E = Vf.T @ np.diag(ops.B(j)) @ Vf
                    worst_sbp = max(worst_sbp, np.abs(Q + Q.T - E).max())
                    QN = ops.dense_QN(j)
                    blk = np.zeros_like(QN)
                    blk[ops.Np:, ops.Np:] = np.diag(ops.B(j))
                    worst_dec = max(worst_dec, np.abs(QN + QN.T - blk).max())
                    worst_q1 = max(worst_q1, np.abs(QN.sum(axis=1)).max())
                rows.append((fam, N, f"sbp_{d}d", float(worst_sbp)))
                rows.append((fam, N, f"decoupled_sbp_{d}d", float(worst_dec)))
                rows.append((fam, N, f"QN1_{d}d", float(worst_q1)))
    return rows


def cost_table(Ns, schemes=SCHEMES):
    return [(N, sch) + cost_model(N, sch) for N in Ns for sch in schemes]


# CSV output ---------------------------------------------------------------

def _fmt(x):
    return f"{x:.17g}" if isinstance(x, (float, np.floating)) else str(x)


def _append_csv(path, header, rows):
    new = not os.path.exists(path)
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_errors(path, cfg, per_field, combined, h):
    nv = len(per_field)
    header = ["h", "N", "family", "warp"] + [f"err_u{c}" for c in range(nv)] + ["err_combined_rss"]
    _append_csv(path, header, [[float(h), cfg.N, cfg.family, cfg.warp] + [float(e) for e in per_field]
                               + [float(combined)]])


def timeseries_header(nv):
    return ["t", "entropy"] + [f"total_u{c}" for c in range(nv)] + ["kappa", "neg_dkappa_dt"]


def timeseries_row(rec, rate):
    return ([float(rec["t"]), float(rec["entropy"])] + [float(v) for v in rec["totals"]]
            + [float(rec["kappa"]), float(rate)])


def write_timeseries(path, result):
    """Rewrite the complete time series; -dkappa/dt is blank (nan) at the end points."""
    rate_t, rate = result.rate
    lookup = {float(t): float(r) for t, r in zip(rate_t, rate)}
    rows = [timeseries_row(r, lookup.get(float(r["t"]), float("nan"))) for r in result.series]
    if os.path.exists(path):
        os.remove(path)
    _append_csv(path, timeseries_header(result.u.shape[-1]), rows)


def config_dict(cfg):
    return asdict(cfg)


def config_from_mapping(mapping, base=None):
    """Build a RunConfig from string key/value pairs (used for --config files)."""
    cfg = base or RunConfig()
    kinds = {f.name: f.type for f in fields(RunConfig)}
    updates = {}
    for key, value in mapping.items():
        key = key.strip().replace("-", "_")
        if key == "tfinal":
            key = "t_final"
        if key not in kinds:
            raise ConfigurationError(f"unknown config key {key!r}")
        default = getattr(RunConfig(), key)
        if isinstance(default, bool):
            updates[key] = str(value).strip().lower() in ("1", "true", "yes", "on")
        elif isinstance(default, int):
            updates[key] = int(value)
        elif isinstance(default, float):
            updates[key] = float(value)
        elif isinstance(default, tuple):
            updates[key] = parse_mesh(value)
        else:
            updates[key] = str(value).strip()
    return replace(cfg, **updates)


def mesh_h(cfg, mesh_edge):
    """Mesh-size label matching the published axes (2D: edge/10, 3D: edge)."""
    return mesh_edge / 10.0 if cfg.experiment == "vortex2d" else mesh_edge

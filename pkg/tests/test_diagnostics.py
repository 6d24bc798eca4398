import numpy as np
import pytest

from esdg.diagnostics import (
    cost_model,
    dissipation_rate,
    gauss_quadrature_data,
    kinetic_energy,
    l2_error,
)
from esdg.euler import conservative
from esdg.initial_conditions import isentropic_vortex_2d, taylor_green
from esdg.mesh import build_cartesian_mesh, warp_mesh_2d
from esdg.solver import Solver, constant_state
from esdg.timestepping import integrate, observed_order


def poly_state(x, t=0.0):
    X, Y = x[..., 0], x[..., 1]
    rho = 2.0 + 0.01 * X * Y
    vel = np.stack([0.1 * X ** 2, -0.2 * Y], axis=-1)
    return np.concatenate([rho[..., None], vel, (3.0 + 0.01 * X ** 2 * Y ** 2)[..., None]], axis=-1)


@pytest.mark.parametrize("family", ["gauss", "gll"])
def test_l2_error_vanishes_for_resolved_polynomials(family):
    m = build_cartesian_mesh(2, [(0, 4), (-1, 1)], (2, 2))
    s = Solver(m, 2, family, "lf")
    u = s.project(poly_state)
    per_field, combined = l2_error(s, u, poly_state, 0.0)
    assert combined <= 1e-13
    assert per_field.shape == (4,)


def test_l2_error_combined_is_root_sum_square():
    m = build_cartesian_mesh(2, [(0, 20), (-5, 5)], (4, 2))
    s = Solver(m, 2, "gauss", "lf")
    u = s.project(isentropic_vortex_2d)
    per_field, combined = l2_error(s, u, isentropic_vortex_2d, 0.0)
    assert combined == pytest.approx(np.sqrt(np.sum(per_field ** 2)), rel=1e-14)
    assert np.all(per_field >= 0) and combined > 0


def test_l2_error_of_constant_offset():
    # error of (exact + c) over a curved mesh is |c| sqrt(area)
    m = warp_mesh_2d(build_cartesian_mesh(2, [(0, 20), (-5, 5)], (4, 2), N_geo=2), 1 / 64)
    s = Solver(m, 2, "gauss", "lf")
    u = np.ones(s.x.shape[:-1] + (4,))
    exact = lambda x, t: np.full(x.shape[:-1] + (4,), 0.9)
    _, combined = l2_error(s, u, exact, 0.0)
    assert combined == pytest.approx(0.1 * np.sqrt(4 * 200.0), rel=1e-12)


def test_quadrature_integrates_area():
    m = warp_mesh_2d(build_cartesian_mesh(2, [(0, 20), (-5, 5)], (8, 4), N_geo=3), 1 / 16)
    s = Solver(m, 3, "gauss", "lf")
    q = gauss_quadrature_data(s, 6)
    assert np.einsum("q,kq->", q.w, q.J) == pytest.approx(200.0, rel=1e-12)


def test_kinetic_energy_rest_state():
    m = build_cartesian_mesh(3, [(-np.pi, np.pi)] * 3, (2, 2, 2))
    s = Solver(m, 2, "gauss", "lf")
    assert kinetic_energy(s, constant_state(s)) == 0.0


def test_tgv_kinetic_energy_against_overintegration():
    m = build_cartesian_mesh(3, [(-np.pi, np.pi)] * 3, (4, 4, 4))
    s = Solver(m, 3, "gauss", "lf")
    u = s.project(taylor_green)
    k = kinetic_energy(s, u)
    fine = kinetic_energy(s, u, gauss_quadrature_data(s, 10 * (s.N + 1)))
    assert abs(k - fine) <= 1e-6
    # sin^2 cos^2 cos^2 averages to 1/8 in each of two components
    assert k == pytest.approx(0.25, abs=2e-2)


def test_dissipation_rate_centered_difference():
    t = np.linspace(0, 1, 11)
    tc, rate = dissipation_rate(t, 1 - t ** 2)
    assert len(rate) == 9
    assert np.allclose(rate, 2 * tc)
    assert len(dissipation_rate([0, 1], [1, 1])[1]) == 0


@pytest.mark.parametrize("scheme,N,expected", [
    ("gll", 1, (48, 48)), ("gauss", 1, (144, 144)), ("staggered", 1, (243, 387)),
    ("gll", 7, (12288, 12288)), ("gauss", 7, (18432, 18432)), ("staggered", 7, (19683, 47331)),
])
def test_cost_model_values(scheme, N, expected):
    assert cost_model(N, scheme) == expected


def test_cost_model_rejects_bad_input():
    with pytest.raises(ValueError):
        cost_model(2, "gauss", d=2)
    with pytest.raises(ValueError):
        cost_model(2, "sem")


def test_entropy_drift_is_time_integration_limited():
    m = build_cartesian_mesh(1, [(0, 2)], 4)
    s = Solver(m, 3, "gauss", "ec")
    x = s.x[..., 0]
    u0 = conservative(1 + 0.5 * np.sin(np.pi * x), np.ones(x.shape + (1,)), np.ones_like(x))
    S0 = s.total_entropy(u0)
    drift = []
    for dt in (0.02, 0.01, 0.005):
        u, _, _, _ = integrate(s.rhs, u0, 1.0, dt)
        drift.append(abs(s.total_entropy(u) - S0))
    assert np.all(observed_order(drift) >= 3.9)

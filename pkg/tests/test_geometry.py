import numpy as np
import pytest

from esdg.geometry import (
    GeometryError,
    compute_geometry,
    compute_geometry_curl_3d,
    compute_geometry_direct,
    normal_mismatch,
)
from esdg.mesh import build_cartesian_mesh, warp_mesh_2d, warp_mesh_3d
from esdg.operators_nd import build_tensor_ops


def test_affine_2d_jacobian():
    m = build_cartesian_mesh(2, [(0, 20), (-5, 5)], (8, 4))
    ops = build_tensor_ops(2, 2, "gauss")
    geo = compute_geometry(m, ops)
    assert np.allclose(geo.J, 1.5625, atol=1e-14)
    assert np.allclose(geo.G, 1.25 * np.eye(2), atol=1e-14)
    assert np.allclose(geo.Jf, 1.25, atol=1e-14)


def test_affine_1d_normals():
    m = build_cartesian_mesh(1, [(0, 10)], 4)
    ops = build_tensor_ops(1, 3, "gll")
    geo = compute_geometry(m, ops)
    assert np.allclose(geo.J, 1.25)
    assert np.allclose(geo.nJ[:, :, 0], [-1.0, 1.0])


def test_physical_nodes_are_mapped():
    m = build_cartesian_mesh(2, [(0, 20), (-5, 5)], (8, 4))
    ops = build_tensor_ops(2, 2, "gll")
    geo = compute_geometry(m, ops)
    assert np.allclose(geo.x[0, 0], [0.0, -5.0])
    assert np.allclose(geo.x[0, -1], [2.5, -2.5])


@pytest.mark.parametrize("family", ["gauss", "gll"])
def test_normals_match_across_warped_faces(family):
    m = warp_mesh_2d(build_cartesian_mesh(2, [(0, 20), (-5, 5)], (16, 8), N_geo=3), 1 / 16)
    ops = build_tensor_ops(2, 3, family)
    geo = compute_geometry(m, ops)
    assert normal_mismatch(m, geo, ops) <= 1e-12
    assert np.all(geo.J > 0)


@pytest.mark.parametrize("family", ["gauss", "gll"])
def test_discrete_gcl_2d(family):
    # sum_j D_j G_ij = 0 holds for isoparametric 2D metrics
    m = warp_mesh_2d(build_cartesian_mesh(2, [(0, 20), (-5, 5)], (16, 8), N_geo=3), 1 / 8)
    ops = build_tensor_ops(2, 3, family)
    geo = compute_geometry(m, ops)
    for i in range(2):
        div = sum(ops.differentiate(geo.G[:, :, i, j], j) for j in range(2))
        assert np.abs(div).max() <= 1e-12


@pytest.mark.parametrize("N_geo", [1, 2])
def test_curl_equals_direct_when_exact(N_geo):
    # affine and low-degree warped maps: the interpolated cofactors are exact at N = 4
    m = build_cartesian_mesh(3, [(0, 15), (0, 20), (0, 5)], (6, 8, 2), N_geo=N_geo)
    if N_geo == 2:
        m = warp_mesh_3d(m)
    ops = build_tensor_ops(3, 4, "gauss")
    a = compute_geometry_direct(m, ops)
    b = compute_geometry_curl_3d(m, ops)
    assert np.abs(a.G - b.G).max() <= 1e-11
    assert np.abs(a.nJ - b.nJ).max() <= 1e-11


def test_curl_metrics_satisfy_discrete_gcl():
    m = warp_mesh_3d(build_cartesian_mesh(3, [(0, 15), (0, 20), (0, 5)], (6, 8, 2), N_geo=3))
    ops = build_tensor_ops(3, 3, "gll")
    geo = compute_geometry(m, ops, "curl")
    for i in range(3):
        div = sum(ops.differentiate(geo.G[:, :, i, j], j) for j in range(3))
        assert np.abs(div).max() <= 1e-11
    assert normal_mismatch(m, geo, ops) <= 1e-12


def test_geometry_degree_above_solution_degree():
    m = build_cartesian_mesh(2, [(0, 1), (0, 1)], (2, 2), N_geo=3)
    with pytest.raises(GeometryError):
        compute_geometry(m, build_tensor_ops(2, 2, "gauss"))


def test_folded_mesh_is_rejected():
    m = build_cartesian_mesh(2, [(0, 1), (0, 1)], (1, 1))
    X = m.X.copy()
    X[0, [0, 1]] = X[0, [1, 0]]
    from dataclasses import replace
    with pytest.raises(GeometryError):
        compute_geometry(replace(m, X=X), build_tensor_ops(2, 1, "gauss"))


def test_unknown_method():
    m = build_cartesian_mesh(2, [(0, 1), (0, 1)], (1, 1))
    with pytest.raises(GeometryError):
        compute_geometry(m, build_tensor_ops(2, 1, "gauss"), "magic")

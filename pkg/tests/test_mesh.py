import numpy as np
import pytest

from esdg.geometry import compute_geometry, face_coordinates_mismatch
from esdg.mesh import (
    BoundaryTag,
    build_cartesian_mesh,
    dump_mesh,
    period_vector,
    warp_2d,
    warp_mesh_2d,
    warp_mesh_3d,
    warp_mesh_tgv,
    with_geometry_degree,
)
from esdg.operators_1d import ConfigurationError
from esdg.operators_nd import build_tensor_ops


def vortex_mesh(K=(8, 4), N_geo=1):
    return build_cartesian_mesh(2, [(0, 20), (-5, 5)], K, N_geo=N_geo)


def test_vortex_mesh_counts():
    m = vortex_mesh()
    assert m.num_elements == 32
    assert np.allclose(m.edge, [2.5, 2.5])
    assert m.volume == 200.0


def test_element_ordering_direction_one_fastest():
    m = vortex_mesh()
    assert np.allclose(m.X[1, 0], [2.5, -5.0])
    assert np.allclose(m.X[8, 0], [0.0, -2.5])


def test_periodic_connectivity_1d():
    m = build_cartesian_mesh(1, [(0, 10)], 4)
    assert m.neighbor[0].tolist() == [3, 1]
    assert m.neighbor[3].tolist() == [2, 0]
    assert m.neighbor_face[0].tolist() == [1, 0]
    assert np.all(m.face_tag == BoundaryTag.INTERIOR)


def test_wall_faces_have_no_neighbor():
    m = build_cartesian_mesh(2, [(0, 2), (0, 1)], (4, 2), ["periodic", "periodic", "wall", "wall"])
    assert np.all(m.neighbor[:4, 2] == -1)
    assert np.all(m.face_tag[:4, 2] == BoundaryTag.WALL)
    assert np.all(m.neighbor[:, :2] >= 0)
    assert m.periodic == (True, False)
    assert np.allclose(period_vector(m), [2.0, 0.0])


def test_neighbors_are_mutual():
    m = build_cartesian_mesh(3, [(0, 15), (0, 20), (0, 5)], (6, 8, 2))
    assert m.num_elements == 96
    for f in range(6):
        nb = m.neighbor[:, f]
        back = m.neighbor[nb, m.neighbor_face[:, f]]
        assert np.array_equal(back, np.arange(96))


def test_one_sided_periodic_is_rejected():
    with pytest.raises(ConfigurationError):
        build_cartesian_mesh(2, [(0, 1), (0, 1)], (2, 2), ["periodic", "wall", "wall", "wall"])


@pytest.mark.parametrize("bad", [dict(K=(0, 2)), dict(box=[(1, 0), (0, 1)]), dict(N_geo=0)])
def test_bad_mesh_arguments(bad):
    kw = dict(d=2, box=[(0, 1), (0, 1)], K=(2, 2))
    kw.update(bad)
    with pytest.raises(ConfigurationError):
        build_cartesian_mesh(**kw)


def test_unknown_tag():
    with pytest.raises(ConfigurationError):
        BoundaryTag.parse("slip")


def test_warp_centre_value():
    lo, hi = np.array([0.0, -5.0]), np.array([20.0, 5.0])
    out = warp_2d(np.array([10.0, 0.0]), 1 / 8, lo, hi)
    assert np.allclose(out, [12.5, 1.25], atol=1e-14)


def test_zero_warp_is_identity():
    m = vortex_mesh(N_geo=2)
    assert np.array_equal(warp_mesh_2d(m, 0.0).X, m.X)


def test_warp_range_checked():
    with pytest.raises(ConfigurationError):
        warp_mesh_2d(vortex_mesh(), 0.2)


@pytest.mark.parametrize("alpha", [1 / 64, 1 / 16, 1 / 8])
def test_warped_2d_mesh_is_watertight(alpha):
    m = warp_mesh_2d(vortex_mesh((16, 8), N_geo=3), alpha)
    ops = build_tensor_ops(2, 3, "gauss")
    geo = compute_geometry(m, ops)
    assert face_coordinates_mismatch(m, geo, ops) <= 1e-12


def test_warped_3d_mesh_is_watertight():
    m = warp_mesh_3d(build_cartesian_mesh(3, [(0, 15), (0, 20), (0, 5)], (6, 8, 2), N_geo=2))
    ops = build_tensor_ops(3, 2, "gauss")
    geo = compute_geometry(m, ops)
    assert face_coordinates_mismatch(m, geo, ops) <= 1e-12


def test_tgv_warp_keeps_boundary_periodic():
    m = warp_mesh_tgv(build_cartesian_mesh(3, [(-np.pi, np.pi)] * 3, (2, 2, 2), N_geo=2))
    ops = build_tensor_ops(3, 2, "gll")
    geo = compute_geometry(m, ops)
    assert face_coordinates_mismatch(m, geo, ops) <= 1e-12


def test_with_geometry_degree_preserves_corners():
    m = vortex_mesh()
    m3 = with_geometry_degree(m, 3)
    assert m3.X.shape == (32, 16, 2)
    assert np.allclose(m3.X[:, 0], m.X[:, 0])


def test_dump_mesh(tmp_path):
    m = vortex_mesh()
    path = tmp_path / "mesh.txt"
    dump_mesh(m, path)
    rows = path.read_text().splitlines()
    assert len(rows) == 32
    assert np.allclose(np.array(rows[0].split(), float), m.X[0].ravel())

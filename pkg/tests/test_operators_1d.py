import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from esdg.operators_1d import (
    ConfigurationError,
    NodeFamily,
    build_nodes,
    build_operator,
    decoupled_derivative,
    gsbp_derivative,
    interpolation_matrix,
)

FAMILIES = ["gauss", "gll"]


def test_midpoint_rule():
    x, w = build_nodes(0, "gauss")
    assert np.allclose(x, [0.0]) and np.allclose(w, [2.0])


def test_two_point_gauss():
    x, w = build_nodes(1, "gauss")
    assert np.allclose(x, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    assert np.allclose(w, [1.0, 1.0], atol=1e-15)


def test_three_point_gll():
    x, w = build_nodes(2, "gll")
    assert np.allclose(x, [-1, 0, 1], atol=1e-15)
    assert np.allclose(w, [1 / 3, 4 / 3, 1 / 3], atol=1e-15)


def test_gll_needs_two_nodes():
    with pytest.raises(ConfigurationError):
        build_nodes(0, "gll")


def test_family_parsing():
    assert NodeFamily.parse("Gauss") is NodeFamily.GAUSS
    assert NodeFamily.parse("lobatto") is NodeFamily.GLL
    with pytest.raises(ConfigurationError):
        NodeFamily.parse("chebyshev")


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("N", range(1, 16))
def test_quadrature_exactness(family, N):
    x, w = build_nodes(N, family)
    deg = 2 * N + 1 if family == "gauss" else 2 * N - 1
    for k in range(deg + 1):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert abs(np.dot(w, x ** k) - exact) < 1e-13


def test_gauss_n1_derivative_matrix():
    op = build_operator(1, "gauss")
    s = np.sqrt(3) / 2
    assert np.allclose(op.D, [[-s, s], [-s, s]], atol=1e-14)


def test_gll_face_interpolation_is_selection():
    op = build_operator(2, "gll")
    assert np.array_equal(op.Vf, [[1, 0, 0], [0, 0, 1]])


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("N", range(1, 16))
def test_operator_identities(family, N):
    r = build_operator(N, family).residuals()
    assert max(r.values()) <= 1e-13, r


@given(N=st.integers(1, 12), family=st.sampled_from(FAMILIES), data=st.data())
def test_derivative_exact_on_polynomials(N, family, data):
    op = build_operator(N, family)
    c = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=N + 1, max_size=N + 1)))
    p = np.polynomial.Polynomial(c)
    assert np.allclose(op.D @ p(op.x), p.deriv()(op.x), atol=1e-10 * (1 + np.abs(c).sum() * N * N))


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("N", [1, 2, 5, 9])
def test_decoupled_derivative_of_linear(family, N):
    op = build_operator(N, family)
    g = np.concatenate([op.x, [-1.0, 1.0]])
    u = decoupled_derivative(op, np.ones(N + 3), g)
    assert np.allclose(u, 1.0, atol=1e-12)


@given(N=st.integers(1, 10), family=st.sampled_from(FAMILIES), data=st.data())
def test_decoupled_derivative_exact_for_polynomials(N, family, data):
    # with f = 1 the decoupled form reproduces D g whenever g is a degree-N polynomial
    op = build_operator(N, family)
    c = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=N + 1, max_size=N + 1)))
    p = np.polynomial.Polynomial(c)
    g = np.concatenate([p(op.x), p(np.array([-1.0, 1.0]))])
    u = decoupled_derivative(op, np.ones(N + 3), g)
    assert np.allclose(u, p.deriv()(op.x), atol=1e-9 * (1 + np.abs(c).sum() * N * N))


def test_decoupled_derivative_shape_check():
    op = build_operator(3, "gauss")
    with pytest.raises(ValueError):
        decoupled_derivative(op, np.ones(4), np.ones(4))


def test_gsbp_derivative_matches_D():
    op = build_operator(4, "gauss")
    g = np.sin(op.x)
    assert np.array_equal(gsbp_derivative(op, g), op.D @ g)


def test_interpolation_reproduces_polynomials():
    x, _ = build_nodes(5, "gauss")
    pts = np.linspace(-1, 1, 11)
    V = interpolation_matrix(x, pts)
    assert np.allclose(V @ x ** 5, pts ** 5, atol=1e-13)
    assert np.allclose(V.sum(axis=1), 1.0, atol=1e-14)


def test_operator_arrays_are_read_only():
    op = build_operator(2, "gauss")
    with pytest.raises(ValueError):
        op.D[0, 0] = 1.0

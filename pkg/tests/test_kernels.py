import numpy as np
import pytest

from nehari_shape import _kernels_py, kernels
from nehari_shape.oracle.fem import Q1Mesh

compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="extension not built")


def test_backend_name_matches_availability():
    assert kernels.BACKEND == ("compiled" if kernels.compiled_available() else "python")
    assert "python" in kernels.backends()


@pytest.mark.parametrize("n", [0, 1, 2, 3, 7, 8, 1000, 1001])
def test_pairwise_sum_matches_fsum(n, rng):
    x = rng.standard_normal(n)
    assert _kernels_py.pairwise_sum(x) == pytest.approx(np.sum(x), abs=1e-12)


def test_pairwise_sum_order_is_fixed_tree():
    # ((1e16 + 1) + (-1e16 + 1)) differs from left-to-right summation
    x = np.array([1e16, 1.0, -1e16, 1.0])
    assert _kernels_py.pairwise_sum(x) == (1e16 + 1.0) + (-1e16 + 1.0)


@compiled
@pytest.mark.parametrize("n", [1, 2, 5, 64, 999, 100003])
def test_pairwise_sum_bit_identical(n, rng):
    x = rng.standard_normal(n) * 10.0 ** rng.integers(-8, 8, n)
    py = _kernels_py.pairwise_sum(x)
    cc = kernels.backends()["compiled"].pairwise_sum(x)
    assert py == cc


def _mesh_inputs(rng, n=9):
    mesh = Q1Mesh(n, n, 1.1)
    nq = mesh.shape.shape[0]
    A = rng.standard_normal((mesh.ncell, nq, 2, 2))
    A = A + np.swapaxes(A, -1, -2)
    w = rng.random((mesh.ncell, nq))
    return mesh, A, w


@compiled
def test_fem_kernels_agree(rng):
    mesh, A, w = _mesh_inputs(rng)
    cc = kernels.backends()["compiled"]
    Kp = _kernels_py.q1_local_stiffness(A, mesh.dshape, mesh.qweights)
    Kc = cc.q1_local_stiffness(A, mesh.dshape, mesh.qweights)
    np.testing.assert_allclose(Kc, Kp, rtol=0, atol=1e-14 * np.abs(Kp).max())
    Mp = _kernels_py.q1_local_mass(w, mesh.shape, mesh.qweights)
    Mc = cc.q1_local_mass(w, mesh.shape, mesh.qweights)
    assert np.array_equal(Mp, Mc)


def test_local_matrices_reference_values():
    # unit coefficient on a square cell: classic Q1 stiffness and mass
    mesh = Q1Mesh(3, 3, 0.5)  # cells 0.5 x 0.5
    K = kernels.q1_local_stiffness(mesh.identity_coef(), mesh.dshape, mesh.qweights)[0]
    expected = np.array([[4, -1, -1, -2], [-1, 4, -2, -1], [-1, -2, 4, -1], [-2, -1, -1, 4]]) / 6
    np.testing.assert_allclose(K, expected, atol=1e-15)
    M = kernels.q1_local_mass(np.ones((mesh.ncell, 9)), mesh.shape, mesh.qweights)[0]
    h2 = 0.25
    expected = h2 / 36 * np.array([[4, 2, 2, 1], [2, 4, 1, 2], [2, 1, 4, 2], [1, 2, 2, 4]])
    np.testing.assert_allclose(M, expected, atol=1e-16)

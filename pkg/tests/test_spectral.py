import numpy as np
import pytest

from nehari_shape.errors import DomainError, ModeIndexError
from nehari_shape.forms import ProblemSpec, inner0
from nehari_shape.quadrature import QuadratureRule
from nehari_shape.spectral import (
    FourierField,
    RectangleSpectrum,
    eigenfunction,
    ground_state,
    lambda1,
    lambda_mk,
)

PI = np.pi


def test_lambda1_examples():
    assert lambda1(1.0) == pytest.approx(5 * PI ** 2 / 4, rel=1e-15)
    assert PI ** 2 < lambda1(1000.0) < PI ** 2 + 1e-4
    assert lambda1(0.5) == pytest.approx(2 * PI ** 2, rel=1e-15)
    for a in (1.0, 1.05, 1.1):
        assert lambda_mk(1, 1, a) == lambda1(a)
    with pytest.raises(DomainError):
        lambda1(0.0)


def test_eigenfunction_examples(rng):
    phi = eigenfunction(1, 1, 1.0)
    assert phi.value([[0.5, 0.0]])[0] == pytest.approx(np.sqrt(2))
    phi12 = eigenfunction(1, 2, 1.0)
    pts = np.column_stack([rng.random(10), rng.uniform(-1, 1, 10)])
    mirrored = pts * [1, -1]
    np.testing.assert_allclose(phi12.value(mirrored), -phi12.value(pts), atol=1e-15)
    rule = QuadratureRule(1.0)
    assert rule.sum(phi12.value(rule.points) ** 2) == pytest.approx(1.0, rel=1e-13)
    with pytest.raises(ModeIndexError):
        eigenfunction(0, 1, 1.0)


@pytest.mark.parametrize("a", [1.0, 1.05])
def test_orthonormality(a):
    rule = QuadratureRule(a)
    modes = [(m, k) for m in range(1, 4) for k in range(1, 5)]
    vals = np.array([eigenfunction(m, k, a).value(rule.points) for m, k in modes])
    G = (vals * rule.weights) @ vals.T
    np.testing.assert_allclose(G, np.eye(len(modes)), atol=1e-12)


def test_laplacian_identity(rng):
    a = 1.05
    pts = np.column_stack([rng.random(25), rng.uniform(-a, a, 25)])
    for m, k in [(1, 1), (2, 3), (3, 2), (5, 7)]:
        phi = eigenfunction(m, k, a)
        np.testing.assert_allclose(-phi.laplacian(pts), lambda_mk(m, k, a) * phi.value(pts),
                                   atol=1e-12 * lambda_mk(m, k, a))


def test_ground_state_examples():
    u = ground_state(1.0)
    rule = QuadratureRule(1.0)
    assert rule.sum(u.value(rule.points) ** 2) == pytest.approx(0.5, rel=1e-14)
    a = 1.05
    u = ground_state(a)
    rule = QuadratureRule(a)
    g = u.grad(rule.points)
    rq = rule.sum((g ** 2).sum(1)) / rule.sum(u.value(rule.points) ** 2)
    assert rq == pytest.approx(lambda1(a), rel=1e-13)
    y = np.linspace(-a, a, 9)
    x = np.linspace(0, 1, 9)
    for pts in (np.column_stack([0 * y, y]), np.column_stack([1 + 0 * y, y]),
                np.column_stack([x, a + 0 * x]), np.column_stack([x, -a + 0 * x])):
        assert np.abs(u.value(pts)).max() <= 1e-15


def test_ground_state_hessian_matches_fd(rng):
    u = ground_state(1.1)
    pts = np.column_stack([rng.random(5), rng.uniform(-1.1, 1.1, 5)])
    h = 1e-6
    for d in range(2):
        e = np.zeros(2)
        e[d] = h
        col = (u.grad(pts + e) - u.grad(pts - e)) / (2 * h)
        np.testing.assert_allclose(u.hessian(pts)[:, :, d], col, atol=1e-7)


def test_u_is_orthogonal_in_second_variation(rng):
    a = 1.03
    rule = QuadratureRule(a)
    spec = ProblemSpec.eigenvalue(ground_state(a), lambda1(a))
    for _ in range(10):
        coefs = [(m, k, rng.standard_normal()) for m in range(1, 4) for k in range(1, 4)]
        h = FourierField(coefs, a)
        assert abs(inner0(spec, rule, spec.ground_state, h)) <= 1e-10


def test_fourier_field_matches_mode_sum(rng):
    a = 1.05
    coefs = [(1, 2, 0.3), (3, 1, -1.2), (2, 2, 0.7)]
    F = FourierField(coefs, a)
    pts = np.column_stack([rng.random(8), rng.uniform(-a, a, 8)])
    val = sum(c * eigenfunction(m, k, a).value(pts) for m, k, c in coefs)
    grad = sum(c * eigenfunction(m, k, a).grad(pts) for m, k, c in coefs)
    hess = sum(c * eigenfunction(m, k, a).hessian(pts) for m, k, c in coefs)
    np.testing.assert_allclose(F.value(pts), val, atol=1e-14)
    np.testing.assert_allclose(F.grad(pts), grad, atol=1e-13)
    np.testing.assert_allclose(F.hessian(pts), hess, atol=1e-12)
    assert np.all(FourierField([], a).value(pts) == 0)


def test_rectangle_spectrum():
    s = RectangleSpectrum(1.0)
    assert s.lambda1 == lambda1(1.0)
    assert s.eigenvalue(1, 2) == pytest.approx(PI ** 2 * 2)
    with pytest.raises(ModeIndexError):
        s.eigenvalue(1, 0)
    with pytest.raises(DomainError):
        RectangleSpectrum(-1.0)

"""Closed-form Dirichlet spectrum of the Laplacian on (0, 1) x (-a, a)."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModeIndexError
from .fields import ScalarField, as_points

PI = np.pi


def _check_a(a):
    if not a > 0:
        raise DomainError(f"half-height a must be positive, got {a}")


def lambda_mk(m, k, a):
    """Eigenvalue ``m^2 pi^2 + (k pi / 2a)^2``."""
    _check_a(a)
    return (m * PI) ** 2 + (k * PI / (2.0 * a)) ** 2


def lambda1(a):
    """First Dirichlet eigenvalue ``pi^2 + (pi / 2a)^2``."""
    return lambda_mk(1, 1, a)


def _y_mode(k, a):
    """Return callables ``Y_k, Y_k', Y_k''`` in y (cos for odd k, sin for even k)."""
    b = k * PI / (2.0 * a)
    if k % 2:
        return (lambda y: np.cos(b * y), lambda y: -b * np.sin(b * y),
                lambda y: -b * b * np.cos(b * y))
    return (lambda y: np.sin(b * y), lambda y: b * np.cos(b * y),
            lambda y: -b * b * np.sin(b * y))


class ModeField(ScalarField):
    """``c * sin(m pi x) * Y_k(y)`` with analytic gradient and Hessian."""

    def __init__(self, m, k, a, amplitude):
        if m < 1 or k < 1:
            raise ModeIndexError(f"mode indices must be >= 1, got (m, k) = ({m}, {k})")
        _check_a(a)
        self.m, self.k, self.a = int(m), int(k), float(a)
        self.amplitude = float(amplitude)
        self._Y = _y_mode(self.k, self.a)

    def _parts(self, pts):
        pts = as_points(pts)
        x, y = pts[:, 0], pts[:, 1]
        w = self.m * PI
        X = (np.sin(w * x), w * np.cos(w * x), -w * w * np.sin(w * x))
        Y = tuple(f(y) for f in self._Y)
        return X, Y

    def value(self, pts):
        X, Y = self._parts(pts)
        return self.amplitude * X[0] * Y[0]

    def grad(self, pts):
        X, Y = self._parts(pts)
        return self.amplitude * np.stack([X[1] * Y[0], X[0] * Y[1]], axis=-1)

    def hessian(self, pts):
        X, Y = self._parts(pts)
        c = self.amplitude
        H = np.empty((X[0].shape[0], 2, 2))
        H[:, 0, 0] = c * X[2] * Y[0]
        H[:, 0, 1] = H[:, 1, 0] = c * X[1] * Y[1]
        H[:, 1, 1] = c * X[0] * Y[2]
        return H

    def laplacian(self, pts):
        H = self.hessian(pts)
        return H[:, 0, 0] + H[:, 1, 1]

    def __repr__(self):
        return f"ModeField(m={self.m}, k={self.k}, a={self.a}, amplitude={self.amplitude})"


def eigenfunction(m, k, a):
    """L2-normalized eigenfunction ``sqrt(2/a) sin(m pi x) Y_k(y)``."""
    _check_a(a)
    return ModeField(m, k, a, np.sqrt(2.0 / a))


def ground_state(a):
    """Unnormalized first eigenfunction ``sin(pi x) cos(pi y / 2a)``."""
    return ModeField(1, 1, a, 1.0)


class FourierField(ScalarField):
    """``sum c_mk phi_mk`` over normalized eigenfunctions, evaluated separably."""

    def __init__(self, coefficients, a):
        _check_a(a)
        self.a = float(a)
        self.coefficients = [(int(m), int(k), float(c)) for m, k, c in coefficients]
        for m, k, _ in self.coefficients:
            if m < 1 or k < 1:
                raise ModeIndexError(f"mode indices must be >= 1, got ({m}, {k})")
        M = max((m for m, _, _ in self.coefficients), default=0)
        K = max((k for _, k, _ in self.coefficients), default=0)
        C = np.zeros((M, K))
        for m, k, c in self.coefficients:
            C[m - 1, k - 1] += c
        self.C = np.sqrt(2.0 / self.a) * C
        self.M, self.K = M, K

    def _tables(self, pts, hess=False):
        pts = as_points(pts)
        x, y = pts[:, 0], pts[:, 1]
        wm = PI * np.arange(1, self.M + 1)
        bk = PI * np.arange(1, self.K + 1) / (2.0 * self.a)
        odd = (np.arange(1, self.K + 1) % 2 == 1)
        sx = np.sin(np.outer(x, wm))
        cx = np.cos(np.outer(x, wm))
        ky = np.outer(y, bk)
        Y0 = np.where(odd, np.cos(ky), np.sin(ky))
        Y1 = np.where(odd, -np.sin(ky), np.cos(ky)) * bk
        X = [sx, cx * wm]
        Y = [Y0, Y1]
        if hess:
            X.append(-sx * wm ** 2)
            Y.append(-Y0 * bk ** 2)
        return X, Y

    def _contract(self, Xa, Yb):
        return np.einsum("nm,mk,nk->n", Xa, self.C, Yb)

    def value(self, pts):
        if self.M == 0:
            return np.zeros(as_points(pts).shape[0])
        X, Y = self._tables(pts)
        return self._contract(X[0], Y[0])

    def grad(self, pts):
        if self.M == 0:
            return np.zeros_like(as_points(pts))
        X, Y = self._tables(pts)
        return np.stack([self._contract(X[1], Y[0]), self._contract(X[0], Y[1])], axis=-1)

    def hessian(self, pts):
        n = as_points(pts).shape[0]
        H = np.zeros((n, 2, 2))
        if self.M == 0:
            return H
        X, Y = self._tables(pts, hess=True)
        H[:, 0, 0] = self._contract(X[2], Y[0])
        H[:, 0, 1] = H[:, 1, 0] = self._contract(X[1], Y[1])
        H[:, 1, 1] = self._contract(X[0], Y[2])
        return H


@dataclass(frozen=True)
class RectangleSpectrum:
    """Eigenpairs of the Dirichlet Laplacian on (0, 1) x (-a, a)."""

    a: float

    def __post_init__(self):
        _check_a(self.a)

    def eigenvalue(self, m, k):
        if m < 1 or k < 1:
            raise ModeIndexError(f"mode indices must be >= 1, got ({m}, {k})")
        return lambda_mk(m, k, self.a)

    @property
    def lambda1(self):
        return lambda1(self.a)

    def eigenfunction(self, m, k):
        return eigenfunction(m, k, self.a)

    def ground_state(self):
        return ground_state(self.a)

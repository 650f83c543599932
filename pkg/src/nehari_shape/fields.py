"""Scalar fields on the plane with value, gradient and optional Hessian.

All evaluations are vectorized: a field is called on an ``(n, 2)`` array of
points and returns ``(n,)`` values, ``(n, 2)`` gradients and ``(n, 2, 2)``
Hessians.
"""

import numpy as np

from .errors import DimensionError, UnsupportedFieldError

FD_STEP = 1e-6


def as_points(pts):
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise DimensionError(f"points must have shape (n, dim), got {pts.shape}")
    return pts


class ScalarField:
    """Base class. Subclasses implement ``value`` and ``grad``."""

    #: True when the gradient is a finite-difference approximation.
    fd_gradient = False

    def value(self, pts):
        raise NotImplementedError

    def grad(self, pts):
        raise NotImplementedError

    def hessian(self, pts):
        raise UnsupportedFieldError(f"{type(self).__name__} has no Hessian")

    def __call__(self, pts):
        return self.value(pts)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            return ProductField(self, other)
        return LinearCombination([(float(other), self)])

    __rmul__ = __mul__

    def __neg__(self):
        return LinearCombination([(-1.0, self)])

    def __add__(self, other):
        return LinearCombination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return LinearCombination([(1.0, self), (-1.0, other)])


class FunctionField(ScalarField):
    """Field from plain callables.

    When ``grad`` is omitted the gradient is approximated by central
    differences with step ``FD_STEP * scale`` and ``fd_gradient`` is set.
    """

    def __init__(self, value, grad=None, hessian=None, scale=1.0, name=None):
        self._value = value
        self._grad = grad
        self._hessian = hessian
        self.scale = scale
        self.name = name or getattr(value, "__name__", "field")
        self.fd_gradient = grad is None

    def value(self, pts):
        return np.asarray(self._value(as_points(pts)), dtype=np.float64)

    def grad(self, pts):
        pts = as_points(pts)
        if self._grad is not None:
            return np.asarray(self._grad(pts), dtype=np.float64)
        return central_gradient(self._value, pts, FD_STEP * self.scale)

    def hessian(self, pts):
        if self._hessian is None:
            raise UnsupportedFieldError(f"field {self.name!r} has no Hessian")
        return np.asarray(self._hessian(as_points(pts)), dtype=np.float64)

    def __repr__(self):
        return f"FunctionField({self.name})"


def central_gradient(func, pts, h):
    """Central-difference gradient of ``func`` at ``pts``."""
    pts = as_points(pts)
    n, dim = pts.shape
    out = np.empty((n, dim))
    for d in range(dim):
        e = np.zeros(dim)
        e[d] = h
        out[:, d] = (np.asarray(func(pts + e)) - np.asarray(func(pts - e))) / (2 * h)
    return out


class ZeroField(ScalarField):
    def value(self, pts):
        return np.zeros(as_points(pts).shape[0])

    def grad(self, pts):
        return np.zeros_like(as_points(pts))

    def hessian(self, pts):
        pts = as_points(pts)
        return np.zeros((pts.shape[0], pts.shape[1], pts.shape[1]))


class CoordinateField(ScalarField):
    """The coordinate function ``x -> x[axis]``."""

    def __init__(self, axis):
        self.axis = axis

    def value(self, pts):
        return as_points(pts)[:, self.axis].copy()

    def grad(self, pts):
        pts = as_points(pts)
        g = np.zeros_like(pts)
        g[:, self.axis] = 1.0
        return g

    def hessian(self, pts):
        pts = as_points(pts)
        return np.zeros((pts.shape[0], pts.shape[1], pts.shape[1]))


class ProductField(ScalarField):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.fd_gradient = left.fd_gradient or right.fd_gradient

    def value(self, pts):
        return self.left.value(pts) * self.right.value(pts)

    def grad(self, pts):
        return (self.left.grad(pts) * self.right.value(pts)[:, None]
                + self.left.value(pts)[:, None] * self.right.grad(pts))

    def hessian(self, pts):
        fl, fr = self.left.value(pts), self.right.value(pts)
        gl, gr = self.left.grad(pts), self.right.grad(pts)
        cross = gl[:, :, None] * gr[:, None, :]
        return (self.left.hessian(pts) * fr[:, None, None]
                + self.right.hessian(pts) * fl[:, None, None]
                + cross + np.swapaxes(cross, 1, 2))


class LinearCombination(ScalarField):
    """``sum_i c_i f_i`` for scalar coefficients ``c_i``."""

    def __init__(self, terms):
        flat = []
        for c, f in terms:
            if isinstance(f, LinearCombination):
                flat.extend((c * c2, f2) for c2, f2 in f.terms)
            else:
                flat.append((float(c), f))
        self.terms = flat
        self.fd_gradient = any(f.fd_gradient for _, f in flat)

    def _combine(self, method, pts):
        out = None
        for c, f in self.terms:
            val = c * getattr(f, method)(pts)
            out = val if out is None else out + val
        return out

    def value(self, pts):
        return self._combine("value", pts)

    def grad(self, pts):
        return self._combine("grad", pts)

    def hessian(self, pts):
        return self._combine("hessian", pts)


class BilinearGridField(ScalarField):
    """Piecewise-bilinear interpolant of nodal values on a uniform grid.

    The grid covers ``[0, 1] x [-a, a]`` with ``values.shape == (nx, ny)``
    nodes, x-major. Gradients are taken cell by cell; on a cell edge the
    cell with the larger index wins, so quadrature rules should keep their
    nodes inside cells.
    """

    def __init__(self, values, a):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or min(values.shape) < 2:
            raise DimensionError(f"grid values must be (nx, ny) with nx, ny >= 2, got {values.shape}")
        self.values = values
        self.a = float(a)
        self.nx, self.ny = values.shape
        self.hx = 1.0 / (self.nx - 1)
        self.hy = 2.0 * self.a / (self.ny - 1)

    def _locate(self, pts):
        pts = as_points(pts)
        sx = pts[:, 0] / self.hx
        sy = (pts[:, 1] + self.a) / self.hy
        i = np.clip(np.floor(sx).astype(np.intp), 0, self.nx - 2)
        j = np.clip(np.floor(sy).astype(np.intp), 0, self.ny - 2)
        return i, j, sx - i, sy - j

    def _corners(self, i, j):
        v = self.values
        return v[i, j], v[i + 1, j], v[i, j + 1], v[i + 1, j + 1]

    def value(self, pts):
        i, j, s, r = self._locate(pts)
        v00, v10, v01, v11 = self._corners(i, j)
        return (v00 * (1 - s) * (1 - r) + v10 * s * (1 - r)
                + v01 * (1 - s) * r + v11 * s * r)

    def grad(self, pts):
        i, j, s, r = self._locate(pts)
        v00, v10, v01, v11 = self._corners(i, j)
        gx = ((v10 - v00) * (1 - r) + (v11 - v01) * r) / self.hx
        gy = ((v01 - v00) * (1 - s) + (v11 - v10) * s) / self.hy
        return np.stack([gx, gy], axis=-1)

    def scaled(self, c):
        return BilinearGridField(c * self.values, self.a)

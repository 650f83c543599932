"""Deformation fields ``Phi_t = id + t R + t^2/2 Rt`` and their kinematics.

Conventions: ``DR[..., i, j] = d R_i / d x_j``. Gradients of scalar fields
are row vectors, so the pulled-back gradient is ``Du . Psi_t`` and the
chain-rule product ``Du . DR`` has components ``sum_i u_i DR[i, j]``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .fields import FD_STEP, as_points


def chi2(M):
    """Sum of the 2x2 principal minors of ``M`` (batched over leading axes).

    This is the coefficient of ``t^2`` in ``det(I + t M)``.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise DimensionError(f"chi2 needs square matrices, got shape {M.shape}")
    n = M.shape[-1]
    if n < 2:
        raise DimensionError("chi2 needs N >= 2")
    if n == 2:
        return M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    tr = np.trace(M, axis1=-2, axis2=-1)
    return 0.5 * (tr * tr - np.trace(M @ M, axis1=-2, axis2=-1))


class DeformationField:
    """Perturbation fields ``R`` and ``Rt`` with Jacobians.

    Parameters
    ----------
    R : callable
        Maps ``(n, dim)`` points to ``(n, dim)`` vectors.
    DR : callable, optional
        Jacobian ``(n, dim, dim)``. Central differences are used when
        omitted, and ``fd_jacobian`` is set so reports can flag it.
    Rtilde, DRtilde : callable, optional
        Second-order field; ``None`` means identically zero.
    scale : float
        Length scale for the finite-difference step.
    """

    def __init__(self, R, DR=None, Rtilde=None, DRtilde=None, dim=2, scale=1.0, name="custom"):
        self.dim = dim
        self.name = name
        self._R = R
        self._DR = DR
        self._Rt = Rtilde
        self._DRt = DRtilde
        self.scale = scale
        self.fd_jacobian = DR is None or (Rtilde is not None and DRtilde is None)

    @property
    def rtilde_is_zero(self):
        return self._Rt is None

    def R(self, pts):
        return np.asarray(self._R(as_points(pts)), dtype=np.float64)

    def DR(self, pts):
        pts = as_points(pts)
        if self._DR is not None:
            return np.asarray(self._DR(pts), dtype=np.float64)
        return central_jacobian(self._R, pts, FD_STEP * self.scale)

    def Rtilde(self, pts):
        pts = as_points(pts)
        if self._Rt is None:
            return np.zeros_like(pts)
        return np.asarray(self._Rt(pts), dtype=np.float64)

    def DRtilde(self, pts):
        pts = as_points(pts)
        if self._Rt is None:
            return np.zeros((pts.shape[0], self.dim, self.dim))
        if self._DRt is not None:
            return np.asarray(self._DRt(pts), dtype=np.float64)
        return central_jacobian(self._Rt, pts, FD_STEP * self.scale)

    def Phi(self, pts, t):
        pts = as_points(pts)
        return pts + t * self.R(pts) + 0.5 * t * t * self.Rtilde(pts)

    def jacobian_t(self, pts, t):
        """``D Phi_t = I + t DR + t^2/2 DRt``."""
        pts = as_points(pts)
        eye = np.eye(self.dim)
        J = eye + t * self.DR(pts)
        if not self.rtilde_is_zero:
            J = J + 0.5 * t * t * self.DRtilde(pts)
        return J

    def pullback(self, pts, t):
        """Return ``(phi_t, Psi_t)`` at ``pts``: determinant and inverse Jacobian."""
        J = self.jacobian_t(pts, t)
        return np.linalg.det(J), np.linalg.inv(J)

    def __repr__(self):
        return f"DeformationField({self.name})"


def central_jacobian(func, pts, h):
    pts = as_points(pts)
    n, dim = pts.shape
    out = np.empty((n, dim, dim))
    for d in range(dim):
        e = np.zeros(dim)
        e[d] = h
        out[:, :, d] = (np.asarray(func(pts + e)) - np.asarray(func(pts - e))) / (2 * h)
    return out


def zero_field(dim=2):
    return DeformationField(lambda p: np.zeros_like(p),
                            lambda p: np.zeros((p.shape[0], dim, dim)), dim=dim, name="zero")


class SeparableField(DeformationField):
    """``R(x, y) = (f(x) theta(y), 0)`` with analytic derivatives.

    ``f`` and ``theta`` are :class:`~nehari_shape.cases.Profile` objects
    carrying first and second derivatives; the second derivatives feed the
    optimal-corrector right-hand side.
    """

    def __init__(self, f, theta):
        self.f = f
        self.theta = theta
        super().__init__(self._r, self._dr, dim=2, name=f"({f.name})*({theta.name})")

    def _r(self, pts):
        out = np.zeros_like(pts)
        out[:, 0] = self.f.value(pts[:, 0]) * self.theta.value(pts[:, 1])
        return out

    def _dr(self, pts):
        x, y = pts[:, 0], pts[:, 1]
        out = np.zeros((pts.shape[0], 2, 2))
        out[:, 0, 0] = self.f.d1(x) * self.theta.value(y)
        out[:, 0, 1] = self.f.value(x) * self.theta.d1(y)
        return out


@dataclass(frozen=True)
class KinematicDerivatives:
    """t-derivatives at t = 0 of ``phi_t`` and ``Psi_t`` at a set of points."""

    phi0dot: np.ndarray
    phi0ddot: np.ndarray
    psi0dot: np.ndarray
    psi0ddot: np.ndarray
    chi2: np.ndarray
    detDR: np.ndarray


def evaluate_kinematics(field, x):
    """Kinematic derivatives of ``field`` at point(s) ``x``."""
    pts = as_points(x)
    DR = field.DR(pts)
    DRt = field.DRtilde(pts)
    c2 = chi2(DR)
    return KinematicDerivatives(
        phi0dot=np.trace(DR, axis1=-2, axis2=-1),
        phi0ddot=2.0 * c2 + np.trace(DRt, axis1=-2, axis2=-1),
        psi0dot=-DR,
        psi0ddot=2.0 * DR @ DR - DRt,
        chi2=c2,
        detDR=np.linalg.det(DR),
    )


def sample_grid(bounds, n=16):
    """``n`` uniform points per axis over the box ``bounds``."""
    axes = [np.linspace(lo, hi, n) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def one_dimensional_check(field, bounds=((0.0, 1.0), (-1.0, 1.0)), n=16, tol=1e-12):
    """True when every component of ``R`` but the first vanishes on a grid.

    Such fields satisfy ``DR.DR = div(R) DR`` and ``chi2(DR) = 0``, which
    enables the shortest second-order formula.
    """
    R = field.R(sample_grid(bounds, n))
    return bool(np.all(np.abs(R[:, 1:]) <= tol))

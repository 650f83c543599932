"""Positive Q1 solution of ``-Delta u = |u|^(q-2) u`` on (0, 1) x (-a, a), p = 2.

The discrete problem is the Galerkin system ``K u = N(u)`` with
``N_i = int |u_h|^(q-2) u_h N_i``, integrated with the same cell Gauss rule
that :func:`cell_rule` returns. Evaluating the energy formulas on the
interpolant with that rule makes ``E_0'[u_h] v_h = 0`` hold to solver
precision for every grid function ``v_h``.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import splu

from ..errors import DomainError, SolverError
from ..fields import BilinearGridField
from ..quadrature import QuadratureRule
from .fem import Q1Mesh

WARM_STEPS = 5
MAX_NEWTON = 40


@dataclass
class GroundStateSolution:
    """Nodal values (boundary included), weak residual and Nehari defect."""

    values: np.ndarray
    a: float
    q: float
    residual: float
    nehari_defect: float
    energy: float
    iterations: int
    trace: List[dict] = field(default_factory=list, repr=False)

    @property
    def field(self):
        return BilinearGridField(self.values, self.a)

    @property
    def nx(self):
        return self.values.shape[0]

    @property
    def ny(self):
        return self.values.shape[1]

    def rule(self):
        return cell_rule(self.nx, self.ny, self.a)


def cell_rule(nx, ny, a, order=3):
    """Quadrature rule whose panels are the grid cells."""
    return QuadratureRule(a, nx - 1, ny - 1, order)


class _System:
    def __init__(self, nx, ny, a, q):
        self.mesh = Q1Mesh(nx, ny, a)
        self.q = q
        self.K = self.mesh.restrict(self.mesh.stiffness(self.mesh.identity_coef()))
        self.M = self.mesh.restrict(self.mesh.mass(np.ones((self.mesh.ncell, self.mesh.shape.shape[0]))))

    def cell(self, x):
        return self.mesh.cell_values(self.mesh.embed(x))

    def power_integral(self, x):
        return float(np.sum(np.abs(self.cell(x)) ** self.q @ self.mesh.qweights))

    def nonlinear(self, x):
        uq = self.cell(x)
        load = np.abs(uq) ** (self.q - 2) * uq * self.mesh.qweights
        full = np.zeros(self.mesh.nnode)
        np.add.at(full, self.mesh.dofs, load @ self.mesh.shape)
        return full[self.mesh.interior]

    def jacobian(self, x):
        uq = self.cell(x)
        Mw = self.mesh.restrict(self.mesh.mass((self.q - 1) * np.abs(uq) ** (self.q - 2)))
        return (self.K - Mw).tocsc()

    def residual(self, x):
        return self.K @ x - self.nonlinear(x)

    def nehari(self, x):
        """Scale ``x`` onto the discrete Nehari manifold."""
        grad = float(x @ (self.K @ x))
        return x * (grad / self.power_integral(x)) ** (1.0 / (self.q - 2))


def _first_mode(sys_, a, iters=30):
    lu = splu(sys_.K)
    pts = sys_.mesh.nodes[sys_.mesh.interior]
    x = np.sin(np.pi * pts[:, 0]) * np.cos(np.pi * pts[:, 1] / (2 * a))
    for _ in range(iters):
        x = lu.solve(sys_.M @ x)
        x /= np.sqrt(float(x @ (sys_.M @ x)))
    return np.abs(x), lu


def lane_emden_ground_state(q=4.0, a=1.0, nx=129, ny=129, tol=1e-10):
    """Positive discrete Lane-Emden solution (p = 2).

    Warm start from the Nehari-scaled first eigenvector, a few
    Nehari-projected preconditioned gradient steps, then damped Newton until
    the weak residual ``max_i |(K u - N(u))_i|`` is at most ``tol``.
    """
    if not q > 2:
        raise DomainError(f"need q > 2 for p = 2, got q={q}")
    if nx < 3 or ny < 3:
        raise DomainError("grid needs interior nodes")
    sys_ = _System(nx, ny, a, float(q))
    x, lu = _first_mode(sys_, a)
    x = sys_.nehari(x)
    trace = []
    for k in range(WARM_STEPS):
        x = sys_.nehari(lu.solve(sys_.nonlinear(x)))
        trace.append({"stage": "gradient", "step": k,
                      "residual": float(np.max(np.abs(sys_.residual(x))))})

    restarted = False
    res = sys_.residual(x)
    rnorm = float(np.max(np.abs(res)))
    it = 0
    while rnorm > tol:
        if it >= MAX_NEWTON:
            raise SolverError(f"Newton stopped at residual {rnorm:.3e} after {it} steps", trace)
        dx = splu(sys_.jacobian(x)).solve(res)
        damping = 1.0
        while True:
            trial = x - damping * dx
            tres = sys_.residual(trial)
            tnorm = float(np.max(np.abs(tres)))
            if tnorm < rnorm or damping < 1e-4:
                break
            damping *= 0.5
        if tnorm >= rnorm and rnorm < 1e3 * tol:
            # roundoff floor reached just above tol
            trace.append({"stage": "newton", "step": it, "residual": tnorm, "damping": damping})
            break
        if tnorm >= rnorm:
            raise SolverError(f"Newton failed to reduce residual {rnorm:.3e}", trace)
        x, res, rnorm = trial, tres, tnorm
        trace.append({"stage": "newton", "step": it, "residual": rnorm, "damping": damping})
        it += 1
        if np.min(x) < -1e-12 * np.max(np.abs(x)):
            if restarted:
                raise SolverError("iterate changed sign after a projection restart", trace)
            restarted = True
            x = sys_.nehari(np.abs(x))
            res = sys_.residual(x)
            rnorm = float(np.max(np.abs(res)))
            trace.append({"stage": "restart", "step": it, "residual": rnorm})

    grad = float(x @ (sys_.K @ x))
    power = sys_.power_integral(x)
    values = sys_.mesh.grid(sys_.mesh.embed(x))
    return GroundStateSolution(
        values=values, a=float(a), q=float(q), residual=rnorm,
        nehari_defect=abs(grad - power) / power,
        energy=(0.5 - 1.0 / q) * power, iterations=it, trace=trace)

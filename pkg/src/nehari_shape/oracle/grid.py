"""Discrete first Dirichlet eigenvalue of a deformed rectangle.

The Dirichlet form on ``Omega_t = Phi_t(Omega)`` is pulled back to the fixed
rectangle, giving the coefficient ``A = phi_t Psi_t Psi_t^T`` and the mass
weight ``phi_t``. Both are discretized with Q1 elements.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.sparse.linalg import splu

from ..errors import ConvergenceError, DomainError, FoldError
from ..kinematics import zero_field
from .fem import Q1Mesh

MIN_NODES = 32


@dataclass
class GridProblem:
    """Pulled-back eigenvalue problem on an ``nx x ny`` node grid (boundary included)."""

    nx: int
    ny: int
    a: float
    deformation: object = None
    t: float = 0.0
    tol: float = 1e-10
    max_iter: int = 500
    history: List[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.nx < MIN_NODES or self.ny < MIN_NODES:
            raise DomainError(f"grid must have at least {MIN_NODES} nodes per axis, "
                              f"got {self.nx} x {self.ny}")
        if self.deformation is None:
            self.deformation = zero_field()

    def operators(self):
        """Interior stiffness and mass matrices and the mesh."""
        mesh = Q1Mesh(self.nx, self.ny, self.a)
        pts = mesh.flat_points()
        phi, Psi = self.deformation.pullback(pts, self.t)
        if np.any(phi <= 0):
            bad = int(np.flatnonzero(phi <= 0)[0])
            raise FoldError(f"phi_t = {phi[bad]:.3e} <= 0 at {tuple(pts[bad])}, t={self.t}")
        nq = mesh.shape.shape[0]
        coef = (phi[:, None, None] * Psi @ np.swapaxes(Psi, -1, -2)).reshape(mesh.ncell, nq, 2, 2)
        K = mesh.restrict(mesh.stiffness(coef))
        M = mesh.restrict(mesh.mass(phi.reshape(mesh.ncell, nq)))
        return K, M, mesh


def grid_lambda1(problem):
    """Smallest eigenvalue of ``K x = lambda M x`` by inverse iteration (shift 0).

    Stops when successive Rayleigh quotients differ by at most
    ``problem.tol``; otherwise raises :class:`ConvergenceError` carrying the
    iterate history.
    """
    K, M, mesh = problem.operators()
    lu = splu(K)
    x = mesh.nodes[mesh.interior]
    # positive start vector close to the ground state
    x = np.sin(np.pi * x[:, 0]) * np.cos(np.pi * x[:, 1] / (2 * problem.a))
    lam_old = np.inf
    history = problem.history
    history.clear()
    for _ in range(problem.max_iter):
        y = lu.solve(M @ x)
        lam = float(y @ (K @ y)) / float(y @ (M @ y))
        history.append(lam)
        x = y / np.sqrt(float(y @ (M @ y)))
        if abs(lam - lam_old) <= problem.tol:
            return lam
        lam_old = lam
    raise ConvergenceError(
        f"inverse iteration did not reach {problem.tol:g} in {problem.max_iter} steps; "
        f"last increments {np.diff(history[-3:])}", history)

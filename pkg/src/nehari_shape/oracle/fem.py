"""Bilinear (Q1) finite elements on a uniform grid of (0, 1) x (-a, a)."""

import numpy as np
import scipy.sparse as sp

from ..errors import DomainError
from ..kernels import q1_local_mass, q1_local_stiffness
from ..quadrature import gauss_legendre


class Q1Mesh:
    """Uniform Q1 mesh with ``nx * ny`` nodes, boundary included.

    Node ``(i, j)`` has index ``i * ny + j`` and sits at
    ``(i hx, -a + j hy)``. Each cell carries an ``order x order`` Gauss rule;
    with the default order 3 the element integrals of products of Q1
    functions are exact.
    """

    def __init__(self, nx, ny, a, order=3):
        if nx < 2 or ny < 2:
            raise DomainError(f"grid needs at least 2 nodes per axis, got {nx} x {ny}")
        if not a > 0:
            raise DomainError(f"half-height a must be positive, got {a}")
        self.nx, self.ny, self.a = int(nx), int(ny), float(a)
        self.hx = 1.0 / (nx - 1)
        self.hy = 2.0 * a / (ny - 1)
        g, w = gauss_legendre(order)
        s, ws = 0.5 * (1 + g), 0.5 * w
        S, T = np.meshgrid(s, s, indexing="ij")
        s, t = S.ravel(), T.ravel()
        self.qweights = np.outer(ws, ws).ravel() * self.hx * self.hy
        # corners (0,0), (1,0), (0,1), (1,1) of the cell
        self.shape = np.stack([(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t], axis=-1)
        dx = np.stack([-(1 - t), 1 - t, -t, t], axis=-1) / self.hx
        dy = np.stack([-(1 - s), -s, 1 - s, s], axis=-1) / self.hy
        self.dshape = np.stack([dx, dy], axis=-1)

        ci, cj = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), indexing="ij")
        ci, cj = ci.ravel(), cj.ravel()
        x0 = ci * self.hx
        y0 = -a + cj * self.hy
        self.points = np.stack([x0[:, None] + s[None, :] * self.hx,
                                y0[:, None] + t[None, :] * self.hy], axis=-1)
        base = ci * ny + cj
        self.dofs = np.stack([base, base + ny, base + 1, base + ny + 1], axis=-1)
        I, J = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
        inner = (I > 0) & (I < nx - 1) & (J > 0) & (J < ny - 1)
        self.interior = np.flatnonzero(inner.ravel())
        self.nodes = np.stack([I.ravel() * self.hx, -a + J.ravel() * self.hy], axis=-1)

    @property
    def ncell(self):
        return self.dofs.shape[0]

    @property
    def nnode(self):
        return self.nx * self.ny

    def flat_points(self):
        return self.points.reshape(-1, 2)

    def assemble(self, local):
        """Global sparse matrix from ``(ncell, 4, 4)`` local matrices."""
        rows = np.repeat(self.dofs, 4, axis=1).ravel()
        cols = np.tile(self.dofs, (1, 4)).ravel()
        n = self.nnode
        return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    def restrict(self, mat):
        idx = self.interior
        return mat[idx][:, idx].tocsc()

    def stiffness(self, coef):
        """Global ``int grad(N_i) A grad(N_j)`` for ``coef`` of shape (ncell, nq, 2, 2)."""
        return self.assemble(q1_local_stiffness(coef, self.dshape, self.qweights))

    def mass(self, weight):
        """Global ``int c N_i N_j`` for ``weight`` of shape (ncell, nq)."""
        return self.assemble(q1_local_mass(weight, self.shape, self.qweights))

    def identity_coef(self):
        return np.broadcast_to(np.eye(2), (self.ncell, self.shape.shape[0], 2, 2))

    def cell_values(self, nodal):
        """Interpolant of nodal values at the cell quadrature points, (ncell, nq)."""
        return nodal[self.dofs] @ self.shape.T

    def embed(self, interior_values):
        full = np.zeros(self.nnode)
        full[self.interior] = interior_values
        return full

    def grid(self, full):
        return full.reshape(self.nx, self.ny)

"""Tensor-product panel Gauss-Legendre quadrature on (0, 1) x (-a, a)."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DomainError, EvaluationError


def _legendre_with_derivative(n, x):
    """Return ``P_n(x)`` and ``P_n'(x)`` by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, n * (x * p1 - p0) / (x * x - 1.0)


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Gauss-Legendre nodes and weights on [-1, 1].

    Roots of P_n are found by Newton iteration from the initial guesses
    ``cos(pi (i - 1/4) / (n + 1/2))``, iterated until the update is below
    1e-15.

    Returns
    -------
    nodes, weights : ndarray
        Nodes in increasing order.
    """
    if n < 1:
        raise DomainError(f"need at least one Gauss point, got {n}")
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes = x[order]
    weights = w[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_gauss(lo, hi, panels, order):
    """1-D composite Gauss rule with ``panels`` equal panels on [lo, hi]."""
    g, w = gauss_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * g[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product panel Gauss rule on the rectangle (0, 1) x (-a, a).

    Nodes are stored x-major: node ``i * ny + j`` is ``(x_i, y_j)``.
    """

    a: float
    panels_x: int = 4
    panels_y: int = 4
    order: int = 12
    x: np.ndarray = field(init=False, repr=False, compare=False)
    y: np.ndarray = field(init=False, repr=False, compare=False)
    wx: np.ndarray = field(init=False, repr=False, compare=False)
    wy: np.ndarray = field(init=False, repr=False, compare=False)
    points: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"half-height a must be positive, got {self.a}")
        if self.panels_x < 1 or self.panels_y < 1:
            raise DomainError("panel counts must be >= 1")
        x, wx = composite_gauss(0.0, 1.0, self.panels_x, self.order)
        y, wy = composite_gauss(-self.a, self.a, self.panels_y, self.order)
        X, Y = np.meshgrid(x, y, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
        w = np.outer(wx, wy).ravel()
        for arr in (x, y, wx, wy, pts, w):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "wx", wx)
        object.__setattr__(self, "wy", wy)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self):
        return self.weights.shape[0]

    @property
    def area(self):
        return 2.0 * self.a

    def refined(self, factor=2):
        """Same panels, ``factor`` times as many Gauss points per panel."""
        return QuadratureRule(self.a, self.panels_x, self.panels_y, self.order * factor)

    def nodes(self):
        """Iterate over ``(point, weight)`` pairs."""
        return zip(map(tuple, self.points), self.weights)

    def sum(self, values):
        """Weighted sum of nodal values with the deterministic reduction."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.weights.shape:
            values = np.broadcast_to(values, self.weights.shape)
        terms = self.weights * values
        if not np.all(np.isfinite(terms)):
            bad = int(np.flatnonzero(~np.isfinite(terms))[0])
            raise EvaluationError(
                f"non-finite integrand value {values[bad]!r} at node "
                f"{tuple(self.points[bad])} (index {bad})"
            )
        return kernels.pairwise_sum(terms)


def integrate(rule, f):
    """Integrate ``f`` over the rectangle of ``rule``.

    ``f`` may be a callable taking an ``(n, 2)`` array of points and
    returning ``n`` values, or an array of values at ``rule.points``.
    """
    values = f(rule.points) if callable(f) else f
    return rule.sum(values)

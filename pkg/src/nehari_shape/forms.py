"""Second variation, coupling functional and Nehari rescaling.

Both supported problems use the Lagrangian

    L(s, z) = |z|^p / p - c |s|^r / r

with ``(c, r) = (lambda_1, p)`` for the p-Laplacian eigenvalue problem and
``(c, r) = (1, q)`` for the Lane-Emden energy. Every formula below is the
general-Lagrangian expression specialized through the derivatives of ``L``;
``D_z L_u`` vanishes for both, so the mixed terms drop out.
"""

import threading
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import DegenerateTrajectoryError, DomainError, InvariantViolation
from .fields import LinearCombination, ScalarField

EIGENVALUE = "eigenvalue"
LANE_EMDEN = "lane_emden"

#: Below this gradient norm the |Du|^(p-2) and |Du|^(p-4) factors are zeroed (p > 2).
GRAD_FLOOR = 1e-14


@dataclass(frozen=True)
class ProblemSpec:
    """Problem kind, exponents, ground state and its level.

    ``level`` is ``lambda_1`` for the eigenvalue problem and ``E_0[u]`` for
    Lane-Emden. Use :meth:`eigenvalue` / :meth:`lane_emden` to build one.
    """

    kind: str
    p: float
    ground_state: ScalarField
    level: float
    q: float = None

    def __post_init__(self):
        if self.kind not in (EIGENVALUE, LANE_EMDEN):
            raise DomainError(f"unknown problem kind {self.kind!r}")
        if self.p < 2:
            raise DomainError(f"p must be >= 2, got {self.p}")
        if self.kind == LANE_EMDEN:
            if self.q is None or self.q < 2 or self.q == self.p:
                raise DomainError(f"Lane-Emden needs q >= 2 and q != p, got q={self.q}")

    @classmethod
    def eigenvalue(cls, u, lam, p=2.0):
        return cls(EIGENVALUE, float(p), u, float(lam))

    @classmethod
    def lane_emden(cls, u, rule, q=4.0, p=2.0):
        """Lane-Emden spec; the level ``E_0[u]`` is computed with ``rule``."""
        g = GroundData(u, rule, p)
        level = rule.sum(g.gnorm ** p) / p - rule.sum(np.abs(g.u) ** q) / q
        return cls(LANE_EMDEN, float(p), u, float(level), float(q))

    @property
    def coupling(self):
        return self.level if self.kind == EIGENVALUE else 1.0

    @property
    def power(self):
        return self.p if self.kind == EIGENVALUE else self.q

    def with_ground_state(self, u):
        """Same problem with a different ground-state representative."""
        return ProblemSpec(self.kind, self.p, u, self.level, self.q)

    def check(self, rule, rtol=1e-8):
        """Verify the defining identity of the ground state under ``rule``.

        Eigenvalue: ``int |Du|^p = level int |u|^p``.
        Lane-Emden: Nehari identity ``int |Du|^p = int |u|^q``.
        Returns the relative defect; raises :class:`InvariantViolation`
        when it exceeds ``rtol``.
        """
        g = GroundData(self.ground_state, rule, self.p)
        grad_p = rule.sum(g.gnorm ** self.p)
        mass = rule.sum(np.abs(g.u) ** self.power)
        rhs = self.coupling * mass
        defect = abs(grad_p - rhs) / max(abs(rhs), 1e-300)
        if defect > rtol:
            raise InvariantViolation(
                f"{self.kind} ground state fails its identity: relative defect {defect:.3e}")
        return defect


class GroundData:
    """Ground-state quantities sampled at the nodes of a quadrature rule."""

    def __init__(self, u, rule, p):
        pts = rule.points
        self.p = p
        self.u = u.value(pts)
        self.Du = u.grad(pts)
        self.gnorm = np.sqrt(np.einsum("ni,ni->n", self.Du, self.Du))
        if p == 2:
            self.w2 = np.ones_like(self.gnorm)
            self.w4 = np.zeros_like(self.gnorm)
        else:
            ok = self.gnorm >= GRAD_FLOOR
            safe = np.where(ok, self.gnorm, 1.0)
            self.w2 = np.where(ok, safe ** (p - 2), 0.0)
            self.w4 = np.where(ok, safe ** (p - 4), 0.0)


class _Cache(threading.local):
    """Per-thread memo of the last ground data, so sweeps do not resample u.

    Holds references to the keyed objects; identity comparison cannot be
    fooled by a recycled ``id``.
    """

    key = (None, None, None)
    value = None

    def get(self, spec, rule):
        u, r, p = self.key
        if u is not spec.ground_state or r is not rule or p != spec.p:
            self.value = GroundData(spec.ground_state, rule, spec.p)
            self.key = (spec.ground_state, rule, spec.p)
        return self.value


_cache = _Cache()


def ground_data(spec, rule):
    return _cache.get(spec, rule)


def lagrangian(spec, g):
    """Nodal values of ``L``, ``L_u`` and ``L_uu`` at the ground state."""
    c, r = spec.coupling, spec.power
    au = np.abs(g.u)
    L = g.gnorm ** spec.p / spec.p - c * au ** r / r
    Lu = -c * au ** (r - 2) * g.u
    Luu = -c * (r - 1) * au ** (r - 2)
    return L, Lu, Luu


def row_times(vec, mat):
    """Row vector times matrix, batched: ``(vec . mat)_j = sum_i vec_i mat_ij``."""
    return np.einsum("ni,nij->nj", vec, mat)


def dot(a, b):
    return np.einsum("ni,ni->n", a, b)


@dataclass
class BilinearFormValue:
    value: float
    breakdown: Dict[str, float] = field(default_factory=dict)


def inner0_terms(spec, rule, g, h):
    """Second variation ``E_0''[u](g, h)`` with its per-integral breakdown."""
    gd = ground_data(spec, rule)
    pts = rule.points
    Dg, Dh = g.grad(pts), h.grad(pts)
    _, _, Luu = lagrangian(spec, gd)
    terms = {"grad_grad": rule.sum(gd.w2 * dot(Dg, Dh))}
    if spec.p != 2:
        terms["grad_u_projection"] = (spec.p - 2) * rule.sum(
            gd.w4 * dot(gd.Du, Dg) * dot(gd.Du, Dh))
    terms["mass"] = rule.sum(Luu * g.value(pts) * h.value(pts))
    return BilinearFormValue(sum(terms.values()), terms)


def inner0(spec, rule, g, h):
    return inner0_terms(spec, rule, g, h).value


def q_functional_terms(spec, field_, rule, h):
    """Coupling functional ``Q[h]`` with its five-term breakdown."""
    gd = ground_data(spec, rule)
    pts = rule.points
    DR = field_.DR(pts)
    divR = np.trace(DR, axis1=-2, axis2=-1)
    DuDR = row_times(gd.Du, DR)
    Dh = h.grad(pts)
    _, Lu, _ = lagrangian(spec, gd)
    terms = {
        "hess_Dh_DuDR": -rule.sum(gd.w2 * dot(Dh, DuDR)),
        "grad_Du_DhDR": -rule.sum(gd.w2 * dot(gd.Du, row_times(Dh, DR))),
        "grad_Du_Dh_divR": rule.sum(gd.w2 * dot(gd.Du, Dh) * divR),
        "Lu_h_divR": rule.sum(Lu * h.value(pts) * divR),
    }
    if spec.p != 2:
        terms["hess_proj"] = -(spec.p - 2) * rule.sum(
            gd.w4 * dot(gd.Du, Dh) * dot(gd.Du, DuDR))
    return BilinearFormValue(sum(terms.values()), terms)


def q_functional(spec, field_, rule, h):
    return q_functional_terms(spec, field_, rule, h).value


def project_out_ground_state(spec, rule, v):
    """Remove the ``<u, .>_0``-component: ``v - (<u,v>_0 / <u,u>_0) u``.

    For the eigenvalue problem ``<u, .>_0`` vanishes identically and ``v`` is
    returned unchanged.
    """
    if spec.kind == EIGENVALUE:
        return v
    u = spec.ground_state
    coef = inner0(spec, rule, u, v) / inner0(spec, rule, u, u)
    return LinearCombination([(1.0, v), (-coef, u)])


def pullback_integrals(spec, field_, rule, v, t, u=None):
    """``A(t) = int |D(u+tv) Psi_t|^p phi_t`` and ``B(t) = int |u+tv|^r phi_t``.

    These are the numerator and denominator of the trajectory quotient on
    the deformed domain, pulled back to the reference rectangle.
    """
    u = spec.ground_state if u is None else u
    pts = rule.points
    phi, Psi = field_.pullback(pts, t)
    if np.any(phi <= 0):
        raise DegenerateTrajectoryError(f"Jacobian determinant not positive at t={t}")
    val = u.value(pts)
    grad = u.grad(pts)
    if v is not None and t != 0:
        val = val + t * v.value(pts)
        grad = grad + t * v.grad(pts)
    pg = row_times(grad, Psi)
    gn = np.sqrt(dot(pg, pg))
    A = rule.sum(gn ** spec.p * phi)
    B = rule.sum(np.abs(val) ** spec.power * phi)
    return A, B


def nehari_alpha(spec, field_, rule, v, t):
    """Scaling that puts ``alpha_t (u + t v) o Phi_t^{-1}`` on the Nehari manifold.

    Closed form for the homogeneous pair: ``alpha_t = (A(t)/B(t))^(1/(q-p))``.
    """
    if spec.kind != LANE_EMDEN:
        raise DomainError("nehari_alpha is defined for the Lane-Emden problem only")
    A, B = pullback_integrals(spec, field_, rule, v, t)
    if A <= 0:
        raise DegenerateTrajectoryError(f"gradient integral vanishes at t={t}")
    if B <= 0:
        raise DegenerateTrajectoryError(f"mass integral vanishes at t={t}")
    return (A / B) ** (1.0 / (spec.q - spec.p))

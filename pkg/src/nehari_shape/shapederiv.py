"""First and second t-derivatives of the trajectory value at t = 0.

For the Lane-Emden energy this is ``m(t) = E_t[U_t]`` along the Nehari
trajectory; for the eigenvalue problem it is the Rayleigh quotient
``nu(t)``. Both are assembled from the same named integrals; the eigenvalue
values carry the extra factor ``p / int |u|^p``.
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import DomainError, InvariantViolation, PreconditionError
from .forms import (
    EIGENVALUE,
    LANE_EMDEN,
    dot,
    ground_data,
    inner0_terms,
    lagrangian,
    project_out_ground_state,
    q_functional_terms,
    row_times,
)
from .kinematics import chi2, one_dimensional_check
from .quadrature import composite_gauss

GENERIC = "generic"
ONE_DIMENSIONAL = "one_dimensional"
PLANAR = "planar"
AUTO = "auto"

#: ``|<v,v>_0|`` below this fraction of its largest term counts as zero.
DEGENERATE_RTOL = 1e-12

PI = np.pi


@dataclass
class DerivativeReport:
    """Term-by-term result of a second-order evaluation.

    ``second_order`` is the line-optimized value ``... - Q[v]^2 / <v,v>_0``;
    ``unoptimized`` is the value for the corrector exactly as given.
    ``degenerate`` is ``None``, ``"unbounded_below"`` (``<v,v>_0 = 0``,
    ``Q[v] != 0``) or ``"flat"`` (both zero).
    """

    first_order: float
    second_order: float
    terms: Dict[str, float]
    q_u: float
    q_v: float
    vv0: float
    gamma_star: float
    fast_path: str
    unoptimized: float = float("nan")
    degenerate: Optional[str] = None
    kind: str = EIGENVALUE
    corrector: str = ""
    notes: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _sample(spec, field_, rule):
    gd = ground_data(spec, rule)
    pts = rule.points
    DR = field_.DR(pts)
    return gd, DR, np.trace(DR, axis1=-2, axis2=-1), row_times(gd.Du, DR)


def _normalizer(spec, rule):
    """``p / int |u|^p`` for the eigenvalue quotient, 1 for the energy."""
    if spec.kind == LANE_EMDEN:
        return 1.0
    gd = ground_data(spec, rule)
    return spec.p / rule.sum(np.abs(gd.u) ** spec.p)


def first_order(spec, field_, rule):
    """``m'(0)`` (Lane-Emden) or ``nu'(0)`` (eigenvalue)."""
    gd, _, divR, DuDR = _sample(spec, field_, rule)
    L, _, _ = lagrangian(spec, gd)
    raw = rule.sum(L * divR) - rule.sum(gd.w2 * dot(gd.Du, DuDR))
    return _normalizer(spec, rule) * raw


def pohozaev_first_order(spec, field_, rule, panels=None, order=None):
    """Boundary form ``-(p-1) / int |u|^p * int_dOmega |Du|^p (R, n)`` on the rectangle."""
    if spec.kind != EIGENVALUE:
        raise DomainError("the boundary form is stated for the eigenvalue problem")
    a = rule.a
    px = panels or rule.panels_x
    py = panels or rule.panels_y
    n = order or rule.order
    xs, wx = composite_gauss(0.0, 1.0, px, n)
    ys, wy = composite_gauss(-a, a, py, n)
    u = spec.ground_state
    p = spec.p

    def side(pts, weights, normal):
        g = u.grad(pts)
        gn = np.sqrt(dot(g, g)) ** p
        Rn = field_.R(pts) @ np.asarray(normal, dtype=float)
        return float(np.dot(weights, gn * Rn))

    ones_y, ones_x = np.ones_like(ys), np.ones_like(xs)
    total = (side(np.column_stack([0 * ones_y, ys]), wy, (-1, 0))
             + side(np.column_stack([ones_y, ys]), wy, (1, 0))
             + side(np.column_stack([xs, -a * ones_x]), wx, (0, -1))
             + side(np.column_stack([xs, a * ones_x]), wx, (0, 1)))
    gd = ground_data(spec, rule)
    return -(p - 1) * total / rule.sum(np.abs(gd.u) ** p)


def deformation_terms(spec, field_, rule):
    """The corrector-free integrals of the second-order formula (unnormalized)."""
    gd, DR, divR, DuDR = _sample(spec, field_, rule)
    pts = rule.points
    L, _, _ = lagrangian(spec, gd)
    terms = {}
    if not field_.rtilde_is_zero:
        DRt = field_.DRtilde(pts)
        terms["L_divRt"] = rule.sum(L * np.trace(DRt, axis1=-2, axis2=-1))
        terms["DzL_DuDRt"] = -rule.sum(gd.w2 * dot(gd.Du, row_times(gd.Du, DRt)))
    terms["DzL_DuDR_divR"] = -2 * rule.sum(gd.w2 * dot(gd.Du, DuDR) * divR)
    terms["DzL_DuDRDR"] = 2 * rule.sum(gd.w2 * dot(gd.Du, row_times(DuDR, DR)))
    terms["L_chi2"] = 2 * rule.sum(L * chi2(DR))
    hess = rule.sum(gd.w2 * dot(DuDR, DuDR))
    if spec.p != 2:
        hess += (spec.p - 2) * rule.sum(gd.w4 * dot(gd.Du, DuDR) ** 2)
    terms["D2L_DuDR_DuDR"] = hess
    return terms


def _fast_terms(spec, field_, rule, path):
    gd, DR, _, DuDR = _sample(spec, field_, rule)
    hess = rule.sum(gd.w2 * dot(DuDR, DuDR))
    if spec.p != 2:
        hess += (spec.p - 2) * rule.sum(gd.w4 * dot(gd.Du, DuDR) ** 2)
    if path == ONE_DIMENSIONAL:
        return hess
    det = np.linalg.det(DR)
    L, _, _ = lagrangian(spec, gd)
    return -2 * rule.sum(gd.gnorm ** spec.p * det) + 2 * rule.sum(L * det) + hess


def _resolve_path(field_, path):
    if path == AUTO:
        if not field_.rtilde_is_zero:
            return GENERIC
        if one_dimensional_check(field_):
            return ONE_DIMENSIONAL
        return PLANAR if field_.dim == 2 else GENERIC
    if path == GENERIC:
        return path
    if path not in (ONE_DIMENSIONAL, PLANAR):
        raise DomainError(f"unknown path {path!r}")
    if not field_.rtilde_is_zero:
        raise PreconditionError(f"{path} path needs Rtilde = 0")
    if path == ONE_DIMENSIONAL and not one_dimensional_check(field_):
        raise PreconditionError("one_dimensional path needs R = (R_1, 0, ..., 0)")
    if path == PLANAR and field_.dim != 2:
        raise PreconditionError("planar path needs N = 2")
    return path


def _corrector_parts(spec, field_, rule, corrector):
    """``(Q[v], <v,v>_0, |largest vv term|)`` after projecting out ``u``."""
    if corrector.field is None:
        if corrector.analytic_ww is None:
            raise DomainError(f"corrector {corrector.label!r} has neither field nor closed form")
        if spec.kind != EIGENVALUE:
            raise DomainError("closed-form correctors exist for the eigenvalue problem only")
        ww = corrector.analytic_ww
        return -ww, ww, abs(ww)
    v = project_out_ground_state(spec, rule, corrector.field)
    qv = q_functional_terms(spec, field_, rule, v).value
    vv = inner0_terms(spec, rule, v, v)
    scale = max((abs(x) for x in vv.breakdown.values()), default=0.0)
    return qv, vv.value, scale


def second_order(spec, field_, rule, corrector, path=AUTO, first_order_tol=1e-8):
    """Second derivative of the trajectory value with a line-optimized corrector.

    Parameters
    ----------
    spec : ProblemSpec
    field_ : DeformationField
    rule : QuadratureRule
    corrector : CorrectorSpec
        Correctors with ``field=None`` are taken through their closed-form
        ``<w, w>_0`` and ``Q[w] = -<w, w>_0``.
    path : {'auto', 'generic', 'one_dimensional', 'planar'}
        Which assembly to use for the corrector-free part. ``auto`` takes
        the shortest one the field admits.
    first_order_tol : float or None
        The eigenvalue formula and the fast paths assume a vanishing first
        derivative; a larger ``|first_order|`` raises
        :class:`PreconditionError`. ``None`` skips the check.

    Returns
    -------
    DerivativeReport
    """
    path = _resolve_path(field_, path)
    d1 = first_order(spec, field_, rule)
    needs_stationary = spec.kind == EIGENVALUE or path != GENERIC
    if needs_stationary and first_order_tol is not None and abs(d1) > first_order_tol:
        raise PreconditionError(
            f"first-order derivative {d1:.6e} exceeds tolerance {first_order_tol:g}; "
            "the second-order formula assumes it vanishes")

    terms = deformation_terms(spec, field_, rule)
    generic_core = sum(terms.values())
    core = generic_core if path == GENERIC else _fast_terms(spec, field_, rule, path)

    u = spec.ground_state
    qu = q_functional_terms(spec, field_, rule, u).value
    if spec.kind == LANE_EMDEN:
        uu = inner0_terms(spec, rule, u, u).value
        terms["Qu2_over_uu"] = -qu * qu / uu
        core += terms["Qu2_over_uu"]

    qv, vv, scale = _corrector_parts(spec, field_, rule, corrector)
    if vv < -DEGENERATE_RTOL * max(scale, 1.0):
        raise InvariantViolation(f"<v,v>_0 = {vv:.6e} is negative after projection")

    degenerate = None
    if abs(vv) <= DEGENERATE_RTOL * max(scale, 1.0):
        if abs(qv) > DEGENERATE_RTOL * max(scale, 1.0):
            degenerate, optimized, gamma = "unbounded_below", -np.inf, np.nan
        else:
            degenerate, optimized, gamma = "flat", core, 0.0
        unopt = core + 2 * qv + vv
    else:
        gamma = -qv / vv
        optimized = core - qv * qv / vv
        unopt = core + 2 * qv + vv
    terms["corrector_optimized"] = -qv * qv / vv if degenerate is None else 0.0

    scale_factor = _normalizer(spec, rule)
    return DerivativeReport(
        first_order=d1,
        second_order=scale_factor * optimized,
        terms={k: float(v) for k, v in terms.items()},
        q_u=float(qu),
        q_v=float(qv),
        vv0=float(vv),
        gamma_star=float(gamma),
        fast_path=path,
        unoptimized=float(scale_factor * unopt),
        degenerate=degenerate,
        kind=spec.kind,
        corrector=corrector.label,
        notes={"normalizer": float(scale_factor),
               "fd_jacobian": bool(field_.fd_jacobian),
               "fd_gradient": bool(getattr(corrector.field, "fd_gradient", False))},
    )


def unoptimized_second_order(spec, field_, rule, corrector, first_order_tol=1e-8):
    """Value for the corrector exactly as given (no line optimization)."""
    return second_order(spec, field_, rule, corrector, GENERIC, first_order_tol).unoptimized


def closed_form_first_term(case, a):
    """``int u_x^2 (f' theta)^2 + int u_x^2 (f theta')^2`` for cases iv and v."""
    if a < 1:
        raise DomainError(f"closed forms hold for a >= 1, got a={a}")
    if case == "iv":
        return PI ** 4 / 64 * (a + 3 / a)
    if case == "v":
        return PI ** 2 * (2 * PI ** 2 + 8 * a * a + 3) / (64 * a)
    raise DomainError(f"no closed form for case {case!r}; supported: iv, v")

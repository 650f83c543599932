"""Correctors for the rectangle eigenvalue problem.

The optimal corrector ``w`` solves ``<w, h>_0 = -Q[h]`` for all ``h``. On
the rectangle with ``R = (f theta, 0)`` integration by parts gives
``Q[h] = int g h`` with

    g = 2 u_xx f' theta + 2 u_xy f theta' + u_x (f'' theta + f theta''),

so ``-Delta w - lambda_1 w = -g``. Expanding in the Dirichlet eigenbasis,
``w = -sum v_mk phi_mk`` with ``v_mk = (g, phi_mk) / (lambda_mk - lambda_11)``.
"""

import csv
import re
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    ConfigError,
    DomainError,
    SingularityError,
    UnsupportedFieldError,
)
from .fields import CoordinateField, FunctionField, ScalarField
from .forms import EIGENVALUE
from .kinematics import SeparableField
from .spectral import FourierField, eigenfunction, lambda_mk

PI = np.pi

Y_TIMES_U = "y_times_u"
EIGENMODE = "eigenmode"
FOURIER_OPTIMAL = "fourier_optimal"
ANALYTIC_OPTIMAL = "analytic_optimal"
USER = "user"


@dataclass
class CorrectorSpec:
    """A corrector and how it was built.

    ``field`` is ``None`` only for ``analytic_optimal``, which is known
    through its closed-form ``<w, w>_0`` (``analytic_ww``) and the Galerkin
    identity ``Q[w] = -<w, w>_0``.
    """

    kind: str
    label: str
    field: Optional[ScalarField] = None
    coefficients: List[Tuple[int, int, float]] = dc_field(default_factory=list)
    analytic_ww: Optional[float] = None
    normalized: bool = False

    def scaled(self, gamma):
        """The corrector ``gamma v`` (analytic correctors cannot be rescaled)."""
        if self.field is None:
            raise UnsupportedFieldError(f"corrector {self.label!r} has no field to rescale")
        return CorrectorSpec(self.kind, f"{gamma:g}*{self.label}", gamma * self.field,
                             list(self.coefficients), None, self.normalized)


def _require_rectangle_eigen(spec, field_):
    if spec.kind != EIGENVALUE or spec.p != 2:
        raise DomainError("optimal-corrector construction needs the p=2 eigenvalue problem")
    if not isinstance(field_, SeparableField):
        raise UnsupportedFieldError("optimal corrector needs a separable field R = (f theta, 0)")


def rhs_field(spec, field_):
    """Right-hand side ``g`` of the optimal-corrector problem as a field."""
    _require_rectangle_eigen(spec, field_)
    u = spec.ground_state
    f, th = field_.f, field_.theta

    def value(pts):
        x, y = pts[:, 0], pts[:, 1]
        H = u.hessian(pts)
        ux = u.grad(pts)[:, 0]
        return (2 * H[:, 0, 0] * f.d1(x) * th.value(y)
                + 2 * H[:, 0, 1] * f.value(x) * th.d1(y)
                + ux * (f.d2(x) * th.value(y) + f.value(x) * th.d2(y)))

    return FunctionField(value, name="optimal-corrector rhs")


def fourier_coefficients(spec, field_, rule, M, K):
    """``[(m, k, v_mk)]`` for ``1 <= m <= M, 1 <= k <= K``, ``(m, k) != (1, 1)``.

    ``v_mk = (g, phi_mk) / (lambda_mk - lambda_11)`` by quadrature.
    """
    if M < 1 or K < 1:
        raise DomainError(f"truncation indices must be >= 1, got M={M}, K={K}")
    a = rule.a
    g = rhs_field(spec, field_).value(rule.points)
    lam11 = lambda_mk(1, 1, a)
    out = []
    for m in range(1, M + 1):
        for k in range(1, K + 1):
            if (m, k) == (1, 1):
                continue
            proj = rule.sum(g * eigenfunction(m, k, a).value(rule.points))
            out.append((m, k, proj / (lambda_mk(m, k, a) - lam11)))
    return out


def ww0_truncated(coefficients, a):
    """Truncated ``<w, w>_0 = sum (lambda_mk - lambda_11) v_mk^2``."""
    lam11 = lambda_mk(1, 1, a)
    terms = [(lambda_mk(m, k, a) - lam11) * c * c for m, k, c in coefficients]
    return float(np.sum(terms)) if terms else 0.0


def ww0_analytic(case, a):
    """Closed-form ``<w, w>_0`` of the exact optimal corrector, cases iv and v."""
    if a < 1:
        raise DomainError(f"closed forms hold for a >= 1, got a={a}")
    r = np.sqrt(4 * a * a - 3)
    arg = PI * r / (2 * a)
    if abs(np.sin(arg)) < 1e-9:
        raise SingularityError(f"cot argument {arg!r} is within 1e-9 of a pole")
    cot = np.cos(arg) / np.sin(arg)
    if case == "iv":
        return PI ** 3 / (64 * a) * (3 * PI + PI * a * a - 8 * a * r * cot)
    if case == "v":
        return PI ** 2 / (64 * a) * (3 + 8 * a * a + 2 * PI ** 2 - 8 * PI * a * r * cot)
    raise DomainError(f"no closed form for case {case!r}; supported: iv, v")


def write_coefficients_csv(coefficients, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "k", "v_mk"])
        for m, k, c in coefficients:
            writer.writerow([m, k, f"{c:.12e}"])


# -- catalog -----------------------------------------------------------------

def y_times_u(spec):
    return CorrectorSpec(Y_TIMES_U, "yu", CoordinateField(1) * spec.ground_state)


def eigenmode(m, k, a):
    return CorrectorSpec(EIGENMODE, f"phi_{m},{k}", eigenfunction(m, k, a))


def fourier_optimal(spec, field_, rule, M, K):
    coefs = fourier_coefficients(spec, field_, rule, M, K)
    w = FourierField([(m, k, -c) for m, k, c in coefs], rule.a)
    return CorrectorSpec(FOURIER_OPTIMAL, f"w_{M},{K}", w, coefs)


def analytic_optimal(case, a):
    return CorrectorSpec(ANALYTIC_OPTIMAL, f"w_opt({case})", None,
                         analytic_ww=ww0_analytic(case, a))


def user(field_, label="user"):
    return CorrectorSpec(USER, label, field_)


_FOURIER_RE = re.compile(r"^w_?(\d+)[,_x](\d+)$")
_MODE_RE = re.compile(r"^phi_?(\d+)[,_](\d+)$")


def from_name(name, spec, field_, rule, case=None):
    """Build a corrector from its catalog name.

    Names: ``yu``, ``phi12`` / ``phi_1,2``, ``w46`` / ``w_4,6``,
    ``optimal_analytic``.
    """
    key = name.strip().lower().replace(" ", "")
    if key == "yu":
        return y_times_u(spec)
    if key in ("optimal_analytic", "analytic_optimal", "w_opt"):
        if case is None:
            raise ConfigError("optimal_analytic needs a named case (iv or v)", field="correctors")
        return analytic_optimal(case, rule.a)
    m = _MODE_RE.match(key)
    if m:
        return eigenmode(int(m.group(1)), int(m.group(2)), rule.a)
    m = _FOURIER_RE.match(key)
    if m:
        return fourier_optimal(spec, field_, rule, int(m.group(1)), int(m.group(2)))
    short = re.match(r"^(phi|w)(\d)(\d)$", key)
    if short:
        i, j = int(short.group(2)), int(short.group(3))
        if short.group(1) == "phi":
            return eigenmode(i, j, rule.a)
        return fourier_optimal(spec, field_, rule, i, j)
    raise ConfigError(f"unknown corrector {name!r}", field="correctors")

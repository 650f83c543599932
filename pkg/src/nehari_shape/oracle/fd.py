"""Central differences in t of the trajectory value, computed by pullback quadrature."""

from ..errors import DomainError, UnsupportedFieldError
from ..forms import EIGENVALUE, nehari_alpha, pullback_integrals

STEP_RANGE = (1e-5, 1e-2)


def _corrector_field(corrector):
    if corrector is None:
        return None
    fld = getattr(corrector, "field", corrector)
    if fld is None:
        raise UnsupportedFieldError(
            f"corrector {getattr(corrector, 'label', corrector)!r} has no field to evaluate")
    return fld


def trajectory_value(spec, field_, rule, v, t):
    """``nu(t)`` (Rayleigh quotient) or ``m(t) = E_t[alpha_t (u + t v) o Phi_t^-1]``."""
    A, B = pullback_integrals(spec, field_, rule, v, t)
    if spec.kind == EIGENVALUE:
        return A / B
    alpha = nehari_alpha(spec, field_, rule, v, t)
    return (1.0 / spec.p - 1.0 / spec.q) * alpha ** spec.q * B


def fd_trajectory_derivatives(spec, field_, rule, corrector, step=1e-3):
    """Central first and second differences at t = 0 with one Richardson step.

    The corrector is used as given; pass the ``gamma*``-rescaled corrector
    to compare with the line-optimized second derivative.

    Returns
    -------
    (d1, d2) : tuple of float
    """
    lo, hi = STEP_RANGE
    if not lo <= step <= hi:
        raise DomainError(f"step must lie in [{lo:g}, {hi:g}], got {step:g}")
    v = _corrector_field(corrector)
    h = step
    ts = (-h, -h / 2, 0.0, h / 2, h)
    fm, fmh, f0, fph, fp = (trajectory_value(spec, field_, rule, v, t) for t in ts)
    d1_h = (fp - fm) / (2 * h)
    d1_h2 = (fph - fmh) / h
    d2_h = (fp - 2 * f0 + fm) / (h * h)
    d2_h2 = (fph - 2 * f0 + fmh) / (h * h / 4)
    return (4 * d1_h2 - d1_h) / 3, (4 * d2_h2 - d2_h) / 3

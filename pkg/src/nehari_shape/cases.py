"""Profile vocabulary and the six rectangle perturbation cases.

A perturbation of the rectangle is ``R = (f(x) theta(y), 0)``. Profiles are
picked from a fixed vocabulary; there is deliberately no expression parser.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError
from .kinematics import SeparableField

PI = np.pi


@dataclass(frozen=True)
class Profile:
    name: str
    value: Callable
    d1: Callable
    d2: Callable


def _const(c):
    return lambda s: np.full_like(np.asarray(s, dtype=float), c)


F_PROFILES = {
    "x": Profile("x", lambda x: np.asarray(x, dtype=float), _const(1.0), _const(0.0)),
    "sin": Profile(
        "sin(pi x/2)",
        lambda x: np.sin(PI * x / 2),
        lambda x: PI / 2 * np.cos(PI * x / 2),
        lambda x: -(PI / 2) ** 2 * np.sin(PI * x / 2),
    ),
    "one_minus_cos": Profile(
        "1-cos(pi x/2)",
        lambda x: 1 - np.cos(PI * x / 2),
        lambda x: PI / 2 * np.sin(PI * x / 2),
        lambda x: (PI / 2) ** 2 * np.cos(PI * x / 2),
    ),
    "one": Profile("1", _const(1.0), _const(0.0), _const(0.0)),
    "zero": Profile("0", _const(0.0), _const(0.0), _const(0.0)),
}


def theta_profile(name, a):
    """Profile in y; ``sin`` means ``sin(pi y / 2a)`` and depends on ``a``."""
    if name == "y":
        return Profile("y", lambda y: np.asarray(y, dtype=float), _const(1.0), _const(0.0))
    if name == "sin":
        b = PI / (2 * a)
        return Profile(
            "sin(pi y/2a)",
            lambda y: np.sin(b * y),
            lambda y: b * np.cos(b * y),
            lambda y: -b * b * np.sin(b * y),
        )
    if name == "one":
        return Profile("1", _const(1.0), _const(0.0), _const(0.0))
    raise ConfigError(f"unknown theta profile {name!r}; choose from y, sin, one", field="theta")


THETA_NAMES = ("y", "sin", "one")

#: case id -> (f profile, theta profile)
CASES = {
    "i": ("sin", "y"),
    "ii": ("x", "y"),
    "iii": ("one_minus_cos", "y"),
    "iv": ("sin", "sin"),
    "v": ("x", "sin"),
    "vi": ("one_minus_cos", "sin"),
}


def separable_field(f_name, theta_name, a):
    if f_name not in F_PROFILES:
        raise ConfigError(
            f"unknown f profile {f_name!r}; choose from {', '.join(F_PROFILES)}", field="f")
    return SeparableField(F_PROFILES[f_name], theta_profile(theta_name, a))


def case_field(case, a):
    """Deformation field of a named rectangle case at half-height ``a``."""
    try:
        f_name, theta_name = CASES[case]
    except KeyError:
        raise ConfigError(f"unknown case {case!r}; choose from {', '.join(CASES)}",
                          field="case") from None
    return separable_field(f_name, theta_name, a)

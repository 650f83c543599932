"""Scenario configuration: a flat ``key = value`` file plus overrides.

Blank lines and ``#`` comments are ignored. Lists are comma separated.
Example::

    cases = i, ii, iii
    a_start = 1.01
    a_stop = 1.1
    a_step = 0.01
    correctors = w46, yu
"""

from dataclasses import dataclass, field, fields, replace
from typing import List, Optional, Tuple

import numpy as np

from .cases import CASES, F_PROFILES, THETA_NAMES
from .errors import ConfigError


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


@dataclass
class ScenarioConfig:
    cases: List[str] = field(default_factory=lambda: ["i"])
    f: Optional[str] = None
    theta: Optional[str] = None
    a_start: float = 1.0
    a_stop: float = 1.0
    a_step: float = 0.01
    allow_small_a: bool = False
    correctors: List[str] = field(default_factory=lambda: ["yu"])
    quad_panels: int = 8
    quad_order: int = 12
    path: str = "auto"
    first_order_tol: float = 1e-8
    oracle_fd: bool = True
    oracle_grid: bool = False
    oracle_rtilde: bool = False
    fd_step: float = 1e-3
    fd_tol: float = 1e-5
    grid_n: int = 129
    grid_t: Tuple[float, ...] = (-0.05, -0.02, 0.02, 0.05)
    out_csv: Optional[str] = None
    out_json: Optional[str] = None
    threads: int = 0

    def a_values(self):
        """Inclusive grid ``a_start, a_start + a_step, ..., a_stop``, rounded to 12 digits."""
        if self.a_stop == self.a_start:
            return [float(self.a_start)]
        n = int(round((self.a_stop - self.a_start) / self.a_step))
        return [round(self.a_start + k * self.a_step, 12) for k in range(n + 1)]

    def scenarios(self):
        """``[(label, f_name, theta_name)]`` for every case in the run."""
        if self.f is not None or self.theta is not None:
            return [("custom", self.f, self.theta)]
        return [(c, *CASES[c]) for c in self.cases]

    def validate(self):
        if self.f is not None or self.theta is not None:
            if self.f not in F_PROFILES or self.f in ("one", "zero"):
                raise ConfigError(f"f must be one of x, sin, one_minus_cos; got {self.f!r}", field="f")
            if self.theta not in THETA_NAMES or self.theta == "one":
                raise ConfigError(f"theta must be y or sin; got {self.theta!r}", field="theta")
        for c in self.cases:
            if c not in CASES:
                raise ConfigError(f"unknown case {c!r}; choose from {', '.join(CASES)}", field="cases")
        if not self.correctors:
            raise ConfigError("at least one corrector is required", field="correctors")
        if self.a_step <= 0:
            raise ConfigError(f"a_step must be positive, got {self.a_step}", field="a_step")
        if self.a_stop < self.a_start:
            raise ConfigError("a_stop must be >= a_start", field="a_stop")
        if self.a_start <= 0:
            raise ConfigError("a must be positive", field="a_start")
        if self.a_start < 1 and not self.allow_small_a:
            raise ConfigError(f"a_start = {self.a_start} < 1 needs allow_small_a = true",
                              field="a_start")
        if self.path not in ("auto", "generic", "one_dimensional", "planar"):
            raise ConfigError(f"unknown path {self.path!r}", field="path")
        if not 1e-5 <= self.fd_step <= 1e-2:
            raise ConfigError("fd_step must lie in [1e-5, 1e-2]", field="fd_step")
        if self.quad_panels < 1 or self.quad_order < 1:
            raise ConfigError("quadrature panels and order must be >= 1", field="quad_order")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0", field="threads")
        return self


_PARSERS = {
    "cases": _list,
    "case": _list,
    "f": str.strip,
    "theta": str.strip,
    "a_start": float,
    "a_stop": float,
    "a_step": float,
    "a": float,
    "allow_small_a": _bool,
    "correctors": _list,
    "quad_panels": int,
    "quad_order": int,
    "path": str.strip,
    "first_order_tol": float,
    "oracle_fd": _bool,
    "oracle_grid": _bool,
    "oracle_rtilde": _bool,
    "fd_step": float,
    "fd_tol": float,
    "grid_n": int,
    "grid_t": lambda s: tuple(float(x) for x in _list(s)),
    "out_csv": str.strip,
    "out_json": str.strip,
    "threads": int,
}


def _apply(values, key, raw, line=None):
    if key not in _PARSERS:
        raise ConfigError(f"unknown key {key!r}", line=line, field=key)
    try:
        val = _PARSERS[key](raw)
    except ValueError as exc:
        raise ConfigError(str(exc), line=line, field=key) from None
    if key == "case":
        key = "cases"
    if key == "a":
        values["a_start"] = values["a_stop"] = val
        return
    values[key] = val


def parse_config(text, overrides=None):
    """Parse config text; ``overrides`` is a list of ``key=value`` strings."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        _apply(values, key, val, lineno)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        _apply(values, key, val)
    known = {f.name for f in fields(ScenarioConfig)}
    return replace(ScenarioConfig(), **{k: v for k, v in values.items() if k in known}).validate()


def load_config(path, overrides=None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    return parse_config(text, overrides)


def parse_only(text):
    """``case=...,a=...,corrector=...`` into a filter dict."""
    out = {}
    for part in _list(text):
        if "=" not in part:
            raise ConfigError(f"--only expects key=value pairs, got {part!r}", field="only")
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in ("case", "a", "corrector"):
            raise ConfigError(f"--only key must be case, a or corrector; got {k!r}", field="only")
        out[k] = float(v) if k == "a" else v
    return out


def matches_only(only, case, a, corrector):
    if "case" in only and only["case"] != case:
        return False
    if "a" in only and not np.isclose(only["a"], a, rtol=0, atol=1e-12):
        return False
    if "corrector" in only and only["corrector"] != corrector:
        return False
    return True

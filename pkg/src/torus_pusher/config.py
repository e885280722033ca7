"""Flat key = value experiment configuration.

One assignment per line, ``#`` starts a comment, lists are
comma-separated.  Unknown keys are rejected.  Defaults reproduce the
screw-field experiment: R0 = 7/4, (r, theta, phi)(0) = (3/2, pi/6,
pi/8), V(0) = (10, 10, 5), T = 0.5.

The paper-side ambiguity about the frame of V(0) is exposed as
``initial_velocity_frame``: ``cartesian`` (default) reads V(0) as
Cartesian components, ``rtp`` as (v_r, v_theta, v_phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError

__all__ = ["ExperimentConfig", "parse_config", "DEFAULTS"]

_FIELDS = ("screw", "solovev")
_FRAMES = ("cartesian", "rtp")
_SCHEMES = (
    "rk4", "boris", "imex1", "imex2",
    "limit1", "limit2", "limit1_eff", "limit2_eff",
)

DEFAULTS = {
    "field": "screw",
    "R0": 1.75,
    "B0": 50.0,
    "B1": 10.0,
    "psi_scale": 5.0,
    "potential_scale": -2.0,
    "r_min": 1e-6,
    "r_margin": 1e-3,
    "r0": 1.5,
    "theta0": math.pi / 6.0,
    "phi0": math.pi / 8.0,
    "v0": (10.0, 10.0, 5.0),
    "initial_velocity_frame": "cartesian",
    "eps": (1e-2,),
    "dt": (2e-3,),
    "scheme": ("imex2",),
    # tfinal default depends on the field: 0.5 (screw) or 20.0 (solovev)
    "tfinal": None,
    "stride": 1,
    "reference_dt": 1e-7,
    "asymptotic_dt": 1e-5,
    "step_budget": 100_000_000,
    "boris_staggered": False,
}

_FLOAT_KEYS = {
    "R0", "B0", "B1", "psi_scale", "potential_scale", "r_min", "r_margin",
    "r0", "theta0", "phi0", "tfinal", "reference_dt", "asymptotic_dt",
}
_FLOAT_LIST_KEYS = {"v0", "eps", "dt"}
_STR_LIST_KEYS = {"scheme"}
_STR_KEYS = {"field", "initial_velocity_frame"}
_INT_KEYS = {"stride", "step_budget"}
_BOOL_KEYS = {"boris_staggered"}


@dataclass(frozen=True)
class ExperimentConfig:
    field: str
    R0: float
    B0: float
    B1: float
    psi_scale: float
    potential_scale: float
    r_min: float
    r_margin: float
    r0: float
    theta0: float
    phi0: float
    v0: tuple
    initial_velocity_frame: str
    eps: tuple
    dt: tuple
    scheme: tuple
    tfinal: float
    stride: int
    reference_dt: float
    asymptotic_dt: float
    step_budget: int
    boris_staggered: bool
    raw: dict = field(default_factory=dict, compare=False)


def _integer_multiple(coarse, fine):
    ratio = coarse / fine
    return abs(ratio - round(ratio)) <= 1e-6 * max(ratio, 1.0) and round(ratio) >= 1


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate config text; all defaults applied."""
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
        key, _, rhs = line.partition("=")
        key = key.strip()
        rhs = rhs.strip()
        if key not in DEFAULTS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        if not rhs:
            raise ParseError(f"empty value for {key!r}", line=lineno)
        try:
            values[key] = _convert(key, rhs)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    merged = dict(DEFAULTS)
    merged.update(values)
    if merged["tfinal"] is None:
        merged["tfinal"] = 0.5 if merged["field"] == "screw" else 20.0
    cfg = ExperimentConfig(raw=values, **merged)
    _validate(cfg)
    return cfg


def _convert(key, rhs):
    if key in _FLOAT_KEYS:
        return float(rhs)
    if key in _INT_KEYS:
        return int(float(rhs))
    if key in _BOOL_KEYS:
        low = rhs.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"expected a boolean for {key!r}, got {rhs!r}")
    if key in _FLOAT_LIST_KEYS:
        return tuple(float(v.strip()) for v in rhs.split(","))
    if key in _STR_LIST_KEYS:
        return tuple(v.strip() for v in rhs.split(","))
    if key in _STR_KEYS:
        return rhs
    raise ValueError(f"unhandled key {key!r}")


def _validate(cfg: ExperimentConfig):
    def fail(msg):
        raise ValidationError(msg)

    if cfg.field not in _FIELDS:
        fail(f"field must be one of {_FIELDS}, got {cfg.field!r}")
    if cfg.initial_velocity_frame not in _FRAMES:
        fail(f"initial_velocity_frame must be one of {_FRAMES}")
    for s in cfg.scheme:
        if s not in _SCHEMES:
            fail(f"unknown scheme {s!r}; valid: {_SCHEMES}")
    if not cfg.scheme:
        fail("scheme list is empty")
    if cfg.R0 <= 0.0:
        fail(f"R0 must be positive, got {cfg.R0}")
    if not 0.0 < cfg.r0 < cfg.R0:
        fail(f"r0 = {cfg.r0} outside (0, R0 = {cfg.R0})")
    if len(cfg.v0) != 3:
        fail(f"v0 needs exactly 3 components, got {len(cfg.v0)}")
    for e in cfg.eps:
        if not 0.0 < e <= 1.0:
            fail(f"eps values must lie in (0, 1], got {e}")
    if cfg.tfinal <= 0.0:
        fail(f"tfinal must be positive, got {cfg.tfinal}")
    if cfg.stride < 1:
        fail(f"stride must be >= 1, got {cfg.stride}")
    if cfg.reference_dt <= 0.0 or cfg.asymptotic_dt <= 0.0:
        fail("reference_dt and asymptotic_dt must be positive")
    for dt in cfg.dt:
        if dt <= 0.0:
            fail(f"dt values must be positive, got {dt}")
        if not _integer_multiple(dt, cfg.reference_dt):
            fail(f"dt = {dt} is not an integer multiple of reference_dt = "
                 f"{cfg.reference_dt}")
        if not _integer_multiple(dt, cfg.asymptotic_dt):
            fail(f"dt = {dt} is not an integer multiple of asymptotic_dt = "
                 f"{cfg.asymptotic_dt}")
        if not _integer_multiple(cfg.tfinal, dt):
            fail(f"tfinal = {cfg.tfinal} is not an integer multiple of dt = {dt}")
        if cfg.tfinal / dt > cfg.step_budget:
            fail(f"tfinal/dt = {cfg.tfinal / dt:.3g} exceeds the step budget "
                 f"{cfg.step_budget}")
    # the reference-run budget is enforced by run_sweep, which is the only
    # place the reference integration actually happens

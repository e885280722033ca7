"""Time steppers and the trajectory driver.

Schemes
-------
rk4         classical explicit Runge-Kutta on the full stiff system in
            toroidal coordinates (the reference integrator)
boris       standard Boris pusher on the Cartesian state
imex1       backward/forward Euler combination on the augmented system
imex2       two-stage IMEX scheme (explicit RK blend + L-stable SDIRK)
limit1/2    explicit schemes on the first-order limit model (eps -> 0
            limits of imex1/imex2)
limit1_eff/limit2_eff
            the same rules on the effective second-order model
rk4_order1/rk4_order2
            RK4 on the limit/effective models (conservation oracles)

Implicit stages solve their 2x2 linear systems in closed form; the
matrix Id - a*J0 has determinant 1 + a^2 and is always invertible, so
no iteration is ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .dynamics import AugmentedState, Epsilon, PhysicalState, SlowState
from .errors import DomainError, IntegrationError
from .fields import FieldModel

__all__ = [
    "SdirkConstants",
    "SDIRK",
    "StepSize",
    "Trajectory",
    "rk4_step",
    "boris_step",
    "boris_velocity_update",
    "imex1_step",
    "imex2_step",
    "limit1_step",
    "limit2_step",
    "limit1_eff_step",
    "limit2_eff_step",
    "integrate",
    "SCHEMES",
]


@dataclass(frozen=True)
class SdirkConstants:
    """Constants of the two-stage L-stable SDIRK method.

    sdirk_gamma is the smallest root of X^2 - 2X + 1/2.  The name keeps
    it apart from the geometry coefficient gamma_c.
    """

    sdirk_gamma: float = k.SDIRK_GAMMA
    stage_time_offset: float = k.SDIRK_STAGE_OFFSET
    blend_weight: float = k.SDIRK_BLEND

    def __post_init__(self):
        g = self.sdirk_gamma
        if abs(g * g - 2.0 * g + 0.5) > 1e-15:
            raise ValueError("sdirk_gamma is not a root of X^2 - 2X + 1/2")


SDIRK = SdirkConstants()


@dataclass(frozen=True)
class StepSize:
    """Positive time step."""

    dt: float

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"time step must be positive, got {self.dt}")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states of one run.

    ``states`` has one row per sample; the column layout depends on
    ``kind``: augmented (r, phi, theta, vpar, bmu, u_r, u_perp), slow
    (r, phi, theta, vpar, bmu), toroidal6 (r, theta, phi, v_r, v_theta,
    v_phi), cartesian (x, y, z, vx, vy, vz).
    """

    times: np.ndarray
    states: np.ndarray
    kind: str
    scheme: str
    eps: float | None
    dt: float
    stride: int
    field_id: str
    r0_major: float

    def __len__(self):
        return len(self.times)

    def positions(self) -> np.ndarray:
        """Cartesian positions, one row per sample."""
        s = self.states
        if self.kind == "cartesian":
            return s[:, :3].copy()
        if self.kind == "toroidal6":
            r, theta, phi = s[:, 0], s[:, 1], s[:, 2]
        else:  # augmented / slow: Z ordering (r, phi, theta, ...)
            r, phi, theta = s[:, 0], s[:, 1], s[:, 2]
        big_r = self.r0_major + r * np.cos(theta)
        return np.column_stack(
            [big_r * np.cos(phi), big_r * np.sin(phi), r * np.sin(theta)]
        )

    def final_state(self) -> np.ndarray:
        return self.states[-1].copy()


def rk4_step(rhs, t: float, y, dt: float):
    """One classical RK4 step of a generic ODE y' = rhs(t, y)."""
    y = np.asarray(y, dtype=float)
    k1 = np.asarray(rhs(t, y))
    k2 = np.asarray(rhs(t + dt / 2.0, y + dt / 2.0 * k1))
    k3 = np.asarray(rhs(t + dt / 2.0, y + dt / 2.0 * k2))
    k4 = np.asarray(rhs(t + dt, y + dt * k3))
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def boris_velocity_update(v, e, b, dt: float, eps: float) -> np.ndarray:
    """Boris velocity update for explicit field vectors (E, B).

    Half electric kick, exact-tangent rotation about b/eps, half kick.
    The rotation angle per step is 2*atan(|b| dt / (2 eps)).
    """
    v = np.asarray(v, dtype=float)
    e = np.asarray(e, dtype=float)
    tvec = np.asarray(b, dtype=float) * (0.5 * dt / eps)
    v_minus = v + 0.5 * dt * e
    v_prime = v_minus + np.cross(v_minus, tvec)
    s = 2.0 * tvec / (1.0 + tvec @ tvec)
    v_plus = v_minus + np.cross(v_prime, s)
    return v_plus + 0.5 * dt * e


def boris_step(s: PhysicalState, dt: float, eps: float, fm: FieldModel) -> PhysicalState:
    """One Boris step with fields evaluated at the pre-step position."""
    _check_eps(eps)
    x = s.position
    v = np.asarray(s.velocity, dtype=float)
    ok, *out = k.boris_step(
        fm.kind, fm.params, eps, dt, x.x, x.y, x.z, v[0], v[1], v[2]
    )
    if not ok:
        raise DomainError(f"position {x} outside the field domain")
    return PhysicalState.from_array(np.array(out))


def imex1_step(
    a: AugmentedState, t: float, dt: float, eps: float, fm: FieldModel
) -> AugmentedState:
    """One step of the first-order semi-implicit scheme."""
    _check_eps(eps)
    fm.check_domain(a.slow.r)
    z, u = a.slow, a.fast
    out = k.imex1_step(
        fm.kind, fm.params, eps, dt, t, z.r, z.phi, z.theta, z.vpar, z.bmu,
        u.u_r, u.u_perp,
    )
    return AugmentedState.from_array(np.array(out))


def imex2_step(
    a: AugmentedState, t: float, dt: float, eps: float, fm: FieldModel
) -> AugmentedState:
    """One step of the two-stage second-order IMEX scheme."""
    _check_eps(eps)
    fm.check_domain(a.slow.r)
    z, u = a.slow, a.fast
    out = k.imex2_step(
        fm.kind, fm.params, eps, dt, t, z.r, z.phi, z.theta, z.vpar, z.bmu,
        u.u_r, u.u_perp,
    )
    return AugmentedState.from_array(np.array(out))


def limit1_step(Z: SlowState, t: float, dt: float, fm: FieldModel) -> SlowState:
    """Forward Euler on the first-order limit model."""
    fm.check_domain(Z.r)
    out = k.limit1_step(fm.kind, fm.params, dt, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu)
    return SlowState.from_array(np.array(out))


def limit2_step(Z: SlowState, t: float, dt: float, fm: FieldModel) -> SlowState:
    """Two-stage explicit rule on the first-order limit model."""
    fm.check_domain(Z.r)
    out = k.limit2_step(fm.kind, fm.params, dt, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu)
    return SlowState.from_array(np.array(out))


def limit1_eff_step(
    Y: SlowState, t: float, dt: float, eps: float, fm: FieldModel
) -> SlowState:
    """Forward Euler on the effective second-order model."""
    _check_eps(eps)
    fm.check_domain(Y.r)
    out = k.limit1_eff_step(
        fm.kind, fm.params, eps, dt, t, Y.r, Y.phi, Y.theta, Y.vpar, Y.bmu
    )
    return SlowState.from_array(np.array(out))


def limit2_eff_step(
    Y: SlowState, t: float, dt: float, eps: float, fm: FieldModel
) -> SlowState:
    """Two-stage explicit rule on the effective second-order model."""
    _check_eps(eps)
    fm.check_domain(Y.r)
    out = k.limit2_eff_step(
        fm.kind, fm.params, eps, dt, t, Y.r, Y.phi, Y.theta, Y.vpar, Y.bmu
    )
    return SlowState.from_array(np.array(out))


def _check_eps(eps):
    Epsilon(float(eps))


# scheme id -> (state kind, needs eps)
SCHEMES = {
    "rk4": ("toroidal6", True),
    "boris": ("cartesian", True),
    "imex1": ("augmented", True),
    "imex2": ("augmented", True),
    "limit1": ("slow", False),
    "limit2": ("slow", False),
    "limit1_eff": ("slow", True),
    "limit2_eff": ("slow", True),
    "rk4_order1": ("slow", False),
    "rk4_order2": ("slow", True),
}

_SLOW_CODES = {
    "limit1": k.SCHEME_LIMIT1,
    "limit2": k.SCHEME_LIMIT2,
    "limit1_eff": k.SCHEME_LIMIT1_EFF,
    "limit2_eff": k.SCHEME_LIMIT2_EFF,
    "rk4_order1": k.SCHEME_RK4_ORDER1,
    "rk4_order2": k.SCHEME_RK4_ORDER2,
}

_DIMS = {"augmented": 7, "slow": 5, "toroidal6": 6, "cartesian": 6}


def _initial_array(initial, kind):
    if isinstance(initial, AugmentedState):
        arr = initial.as_array()
    elif isinstance(initial, (SlowState, PhysicalState)):
        arr = initial.as_array()
    else:
        arr = np.asarray(initial, dtype=float).ravel()
    if arr.size != _DIMS[kind]:
        raise ValueError(
            f"initial state has {arr.size} components, scheme needs {_DIMS[kind]}"
        )
    return np.ascontiguousarray(arr, dtype=float)


def integrate(
    scheme: str,
    initial,
    t0: float,
    tfinal: float,
    dt: float,
    eps: float | None,
    fm: FieldModel,
    stride: int = 1,
    boris_staggered: bool = False,
) -> Trajectory:
    """Repeatedly step ``scheme`` from t0 to tfinal, sampling every
    ``stride`` steps plus the final time.

    Memory scales with the sample count, not the step count.  A step
    that leaves the field domain aborts the run: an IntegrationError is
    raised carrying the failing time and the partial trajectory.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; pick one of {sorted(SCHEMES)}")
    kind, needs_eps = SCHEMES[scheme]
    StepSize(float(dt))
    if needs_eps:
        _check_eps(eps)
        eps_val = float(eps)
    else:
        eps_val = 0.0
    if tfinal < t0:
        raise ValueError(f"tfinal {tfinal} earlier than t0 {t0}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if not fm.is_compiled:
        raise TypeError(f"integrate needs a compiled field model, got {fm.model_id}")

    nsteps = int(math.floor((tfinal - t0) / dt + 1e-9))
    y0 = _initial_array(initial, kind)
    fm.check_domain(_minor_radius(y0, kind, fm))

    if nsteps == 0:
        n_samples = 1
    elif nsteps % stride == 0:
        n_samples = nsteps // stride + 1
    else:
        n_samples = nsteps // stride + 2
    times = np.empty(n_samples)
    out = np.empty((n_samples, _DIMS[kind]))

    if kind == "augmented":
        order = 1 if scheme == "imex1" else 2
        status, n_done = k.drive_augmented(
            fm.kind, fm.params, order, eps_val, dt, t0, nsteps, stride, y0, times, out
        )
    elif kind == "slow":
        status, n_done = k.drive_slow(
            fm.kind, fm.params, _SLOW_CODES[scheme], eps_val, dt, t0, nsteps, stride,
            y0, times, out,
        )
    elif kind == "toroidal6":
        status, n_done = k.drive_tor6(
            fm.kind, fm.params, eps_val, dt, t0, nsteps, stride, y0, times, out
        )
    else:
        status, n_done = k.drive_cartesian(
            fm.kind, fm.params, eps_val, dt, t0, nsteps, stride, boris_staggered,
            y0, times, out,
        )

    def _traj(nt, states):
        return Trajectory(
            times=nt, states=states, kind=kind, scheme=scheme,
            eps=(eps_val if needs_eps else None), dt=float(dt), stride=int(stride),
            field_id=fm.model_id, r0_major=fm.torus.R0,
        )

    if status != k.OK:
        filled = (max(n_done, 1) - 1) // stride + 1
        partial = _traj(times[:filled].copy(), out[:filled].copy())
        raise IntegrationError(
            f"{scheme} left the field domain at t = {t0 + n_done * dt}",
            time=t0 + n_done * dt,
            partial=partial,
        )
    return _traj(times, out)


def _minor_radius(y0, kind, fm):
    if kind == "cartesian":
        ok, r, _, _ = k.cart_to_tor(fm.params, y0[0], y0[1], y0[2])
        if not ok:
            raise DomainError("initial Cartesian position outside the field domain")
        return r
    return y0[0]

"""Right-hand sides: full stiff motion, augmented slow/fast split, limits.

The augmented unknowns are Z = (r, phi, theta, vpar, bmu) and
u_perp = (u_r, u_perp) = v_perp / b, evolving as

    dZ/dt            = F(t, Z, u_perp)
    d(J0 u_perp)/dt  = U_perp(t, Z, u_perp) - b(Z) u_perp / eps.

On the manifold b^2 |u_perp|^2 / 2 = bmu this reproduces the physical
motion; off it, bmu stays the slow transverse energy while u_perp may
be damped by the schemes.  Reconstruction of a physical velocity always
uses v_perp = b*u_perp, never sqrt(2*bmu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .errors import DomainError
from .fields import FieldModel, GeometryCoefficients
from .geometry import (
    CartesianPoint,
    ToroidalPoint,
    cartesian_to_toroidal,
    toroidal_to_cartesian,
    velocity_from_field_frame,
    velocity_to_field_frame,
)

__all__ = [
    "SlowState",
    "FastState",
    "AugmentedState",
    "PhysicalState",
    "Epsilon",
    "rhs_cartesian",
    "rhs_full_toroidal",
    "force_parallel",
    "slow_rhs",
    "uperp_drift",
    "limit_drift",
    "rhs_order1",
    "rhs_order2",
    "rhs_order2_explicit",
    "augmented_from_physical",
    "physical_from_augmented",
]


@dataclass(frozen=True)
class SlowState:
    """Slow variables Z = (r, phi, theta, vpar, bmu); bmu >= 0."""

    r: float
    phi: float
    theta: float
    vpar: float
    bmu: float

    def __post_init__(self):
        if self.bmu < 0.0:
            raise ValueError(f"transverse energy bmu must be >= 0, got {self.bmu}")

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.phi, self.theta, self.vpar, self.bmu])

    @staticmethod
    def from_array(a) -> "SlowState":
        return SlowState(*(float(v) for v in a))


@dataclass(frozen=True)
class FastState:
    """Scaled transverse velocity u_perp = v_perp / b."""

    u_r: float
    u_perp: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u_r, self.u_perp])


ZERO_FAST = FastState(0.0, 0.0)


@dataclass(frozen=True)
class AugmentedState:
    """Augmented unknowns (Z, u_perp).

    The constraint defect |b^2 |u|^2/2 - bmu| is a diagnostic only; the
    semi-implicit schemes intentionally leave the manifold when eps is
    small compared to the time step.
    """

    slow: SlowState
    fast: FastState

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.slow.as_array(), self.fast.as_array()])

    @staticmethod
    def from_array(a) -> "AugmentedState":
        return AugmentedState(
            SlowState.from_array(a[:5]), FastState(float(a[5]), float(a[6]))
        )

    def constraint_defect(self, fm: FieldModel) -> float:
        b = float(fm.magnetic(self.slow.r, self.slow.theta)[0])
        u2 = self.fast.u_r**2 + self.fast.u_perp**2
        return abs(b * b * u2 / 2.0 - self.slow.bmu)


@dataclass(frozen=True)
class PhysicalState:
    """Cartesian position and velocity."""

    position: CartesianPoint
    velocity: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.position.as_array(), np.asarray(self.velocity)])

    @staticmethod
    def from_array(a) -> "PhysicalState":
        return PhysicalState(
            CartesianPoint(float(a[0]), float(a[1]), float(a[2])),
            np.asarray(a[3:6], dtype=float),
        )


@dataclass(frozen=True)
class Epsilon:
    """Stiffness parameter, 0 < eps <= 1."""

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")


def _require_compiled(fm: FieldModel):
    if not fm.is_compiled:
        raise TypeError(
            f"{fm.model_id} has no compiled kernel binding; "
            "dynamics evaluations need one of the bundled field models"
        )


def rhs_cartesian(t: float, s: PhysicalState, eps: float, fm: FieldModel) -> np.ndarray:
    """d/dt (x, v) = (v, v x B/eps + E) at a Cartesian state."""
    _require_compiled(fm)
    x = s.position
    ok, bx, by, bz, ex, ey, ez = k.em_cartesian(fm.kind, fm.params, x.x, x.y, x.z)
    if not ok:
        raise DomainError(f"position {x} outside the field domain")
    v = np.asarray(s.velocity, dtype=float)
    bvec = np.array([bx, by, bz])
    evec = np.array([ex, ey, ez])
    return np.concatenate([v, np.cross(v, bvec) / eps + evec])


def rhs_full_toroidal(t: float, state6, eps: float, fm: FieldModel) -> np.ndarray:
    """Stiff motion in coordinates (r, theta, phi, v_r, v_theta, v_phi)."""
    _require_compiled(fm)
    r, theta, phi, vr, vth, vph = (float(v) for v in state6)
    fm.check_domain(r)
    return np.array(
        k.tor6_rhs_eval(fm.kind, fm.params, eps, t, r, theta, phi, vr, vth, vph)
    )


def force_parallel(Z: SlowState, u: FastState, coeffs: GeometryCoefficients) -> float:
    """Parallel force from a precomputed coefficient bundle."""
    b = coeffs.b
    return (
        b * (coeffs.gamma_c * u.u_r + coeffs.alpha * u.u_perp) * Z.vpar
        + b * b * (coeffs.delta - coeffs.domega_dr) * u.u_perp * u.u_r
        + coeffs.beta * (Z.bmu + b * b * (u.u_perp**2 - u.u_r**2) * 0.5)
    )


def slow_rhs(t: float, Z: SlowState, u: FastState, fm: FieldModel) -> np.ndarray:
    """The five-component slow right-hand side F(t, Z, u_perp)."""
    _require_compiled(fm)
    fm.check_domain(Z.r)
    return np.array(
        k.slow_rhs_eval(
            fm.kind, fm.params, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu, u.u_r, u.u_perp
        )
    )


def uperp_drift(t: float, Z: SlowState, u: FastState, fm: FieldModel):
    """Transverse source U_perp(t, Z, u_perp) = (U_r, U_perp)."""
    _require_compiled(fm)
    fm.check_domain(Z.r)
    return k.uperp_eval(
        fm.kind, fm.params, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu, u.u_r, u.u_perp
    )


def limit_drift(t: float, Z: SlowState, fm: FieldModel):
    """Leading perpendicular drift (Ubar_r, Ubar_perp); equals b*U_perp(t,Z,0)."""
    _require_compiled(fm)
    fm.check_domain(Z.r)
    return k.limit_drift_eval(fm.kind, fm.params, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu)


def rhs_order1(t: float, Z: SlowState, fm: FieldModel) -> np.ndarray:
    """First-order limit model; by construction the same evaluation path
    as slow_rhs(t, Z, 0), so the identity F(t, Z, 0) = rhs_order1 is exact."""
    return slow_rhs(t, Z, ZERO_FAST, fm)


def rhs_order2(t: float, Z: SlowState, eps: float, fm: FieldModel) -> np.ndarray:
    """Effective second-order model: F at the fast-variable equilibrium.

    The equilibrium of the stiff equation is u = (eps/b) U_perp(t, Z, 0),
    which equals eps*limit_drift/b^2 since b*U_perp(t, Z, 0) is the b-free
    drift returned by limit_drift.  This composition path is the one the
    integrators use.
    """
    _require_compiled(fm)
    fm.check_domain(Z.r)
    return np.array(
        k.order2_rhs_eval(fm.kind, fm.params, eps, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu)
    )


def rhs_order2_explicit(t: float, Z: SlowState, eps: float, fm: FieldModel) -> np.ndarray:
    """Independent long-hand expansion of the effective model (cross-check)."""
    _require_compiled(fm)
    fm.check_domain(Z.r)
    return np.array(
        k.order2_rhs_explicit(
            fm.kind, fm.params, eps, t, Z.r, Z.phi, Z.theta, Z.vpar, Z.bmu
        )
    )


def augmented_from_physical(s: PhysicalState, fm: FieldModel) -> AugmentedState:
    """Build the augmented unknowns on the constrained manifold."""
    p = cartesian_to_toroidal(s.position, fm.torus)
    ev = fm.eval(p)
    v_r, v_perp, v_par = velocity_to_field_frame(s.velocity, ev.omega, p.theta, p.phi)
    bmu = (v_r * v_r + v_perp * v_perp) / 2.0
    return AugmentedState(
        SlowState(p.r, p.phi, p.theta, v_par, bmu),
        FastState(v_r / ev.b, v_perp / ev.b),
    )


def physical_from_augmented(a: AugmentedState, fm: FieldModel) -> PhysicalState:
    """Rebuild the Cartesian state using v_perp = b*u_perp (bmu is ignored)."""
    Z = a.slow
    p = ToroidalPoint(Z.r, Z.theta, Z.phi)
    x = toroidal_to_cartesian(p, fm.torus)
    ev = fm.eval(p)
    v = velocity_from_field_frame(
        ev.b * a.fast.u_r, ev.b * a.fast.u_perp, Z.vpar, ev.omega, p.theta, p.phi
    )
    return PhysicalState(x, v)

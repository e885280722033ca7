"""Invariant evaluation, error norms, projections, and order estimation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import AugmentedState, PhysicalState, SlowState
from .errors import InsufficientData, MissingPotential, TimeGridMismatch
from .fields import FieldModel
from .integrators import Trajectory

__all__ = [
    "InvariantSeries",
    "ErrorReport",
    "total_energy",
    "adiabatic_mu",
    "kinetic_energy_cartesian",
    "linf_position_error",
    "observed_order",
    "rz_projection",
    "augmented_view",
    "invariant_series",
    "relative_drift",
]


@dataclass(frozen=True)
class InvariantSeries:
    """Sampled values of one named invariant."""

    name: str
    times: np.ndarray
    values: np.ndarray

    def max_relative_drift(self) -> float:
        return relative_drift(self.values)


@dataclass(frozen=True)
class ErrorReport:
    """Error summary of one (scheme, eps, dt) run."""

    scheme: str
    eps: float | None
    dt: float
    err_vs_reference: float
    err_vs_asymptotic: float | None = None
    invariant_drift: dict = field(default_factory=dict)
    observed_order: float | None = None


def relative_drift(values) -> float:
    """max |q(t) - q(0)| / max(|q(0)|, 1); scale-free for small baselines."""
    v = np.asarray(values, dtype=float)
    return float(np.max(np.abs(v - v[0])) / max(abs(v[0]), 1.0))


def _slow_of(state):
    if isinstance(state, AugmentedState):
        return state.slow
    if isinstance(state, SlowState):
        return state
    raise TypeError(f"expected AugmentedState or SlowState, got {type(state)}")


def total_energy(state, fm: FieldModel) -> float:
    """vpar^2/2 + bmu + potential at the state's position.

    Raises MissingPotential when the field model has no potential.
    """
    z = _slow_of(state)
    if not fm.has_potential:
        raise MissingPotential(f"{fm.model_id} has no electrostatic potential")
    pot = float(fm.potential(z.r, z.theta, z.phi))
    return z.vpar**2 / 2.0 + z.bmu + pot


def adiabatic_mu(state, fm: FieldModel) -> float:
    """Classical adiabatic invariant mu = bmu / b(r, theta)."""
    z = _slow_of(state)
    b = float(fm.magnetic(z.r, z.theta)[0])
    return z.bmu / b


def kinetic_energy_cartesian(s: PhysicalState) -> float:
    """|v|^2 / 2 of a Cartesian state."""
    v = np.asarray(s.velocity, dtype=float)
    return float(v @ v) / 2.0


def linf_position_error(traj: Trajectory, reference: Trajectory) -> float:
    """max over shared sample times of the Euclidean position distance.

    Every sample time of ``traj`` must appear in ``reference`` (the
    harness arranges nesting grids); otherwise TimeGridMismatch.
    """
    ta = traj.times
    tr = reference.times
    idx = np.searchsorted(tr, ta)
    idx = np.clip(idx, 0, len(tr) - 1)
    left = np.clip(idx - 1, 0, len(tr) - 1)
    pick = np.where(np.abs(tr[left] - ta) < np.abs(tr[idx] - ta), left, idx)
    tol = 1e-9 * np.maximum(1.0, np.abs(ta))
    if np.any(np.abs(tr[pick] - ta) > tol):
        bad = ta[np.abs(tr[pick] - ta) > tol][0]
        raise TimeGridMismatch(f"time {bad} of trajectory not on the reference grid")
    d = traj.positions() - reference.positions()[pick]
    return float(np.max(np.linalg.norm(d, axis=1)))


def observed_order(errors) -> float:
    """Least-squares slope of log(error) against log(dt)."""
    pairs = [(float(dt), float(e)) for dt, e in errors]
    if len(pairs) < 2:
        raise InsufficientData("need at least two (dt, error) points")
    if any(dt <= 0.0 or e <= 0.0 for dt, e in pairs):
        raise InsufficientData("dt and error values must be positive")
    x = np.log([p[0] for p in pairs])
    y = np.log([p[1] for p in pairs])
    return float(np.polyfit(x, y, 1)[0])


def augmented_view(traj: Trajectory, fm: FieldModel) -> dict:
    """Augmented-variable arrays for any trajectory kind.

    Cartesian and full-toroidal samples are projected onto the
    constrained manifold (bmu from the actual transverse velocity);
    slow-model samples carry u_perp = 0.
    """
    s = traj.states
    n = len(traj.times)
    if traj.kind == "augmented":
        r, phi, theta, vpar, bmu, ur, up = (s[:, j] for j in range(7))
        return dict(r=r, phi=phi, theta=theta, vpar=vpar, bmu=bmu, u_r=ur, u_perp=up)
    if traj.kind == "slow":
        zeros = np.zeros(n)
        return dict(
            r=s[:, 0], phi=s[:, 1], theta=s[:, 2], vpar=s[:, 3], bmu=s[:, 4],
            u_r=zeros, u_perp=zeros.copy(),
        )
    if traj.kind == "toroidal6":
        r, theta, phi = s[:, 0], s[:, 1], s[:, 2]
        vr, vth, vph = s[:, 3], s[:, 4], s[:, 5]
    else:  # cartesian
        x, y, z = s[:, 0], s[:, 1], s[:, 2]
        rho = np.hypot(x, y)
        u = rho - traj.r0_major
        r = np.hypot(u, z)
        theta = np.arctan2(z, u)
        phi = np.arctan2(y, x)
        ct, st = np.cos(theta), np.sin(theta)
        cp, sp = np.cos(phi), np.sin(phi)
        vx, vy, vz = s[:, 3], s[:, 4], s[:, 5]
        vr = vx * ct * cp + vy * ct * sp + vz * st
        vth = -vx * st * cp - vy * st * sp + vz * ct
        vph = -vx * sp + vy * cp
    b, omega = fm.magnetic(r, theta)[:2]
    co, so = np.cos(omega), np.sin(omega)
    vpar = co * vph + so * vth
    vperp = so * vph - co * vth
    bmu = (vr * vr + vperp * vperp) / 2.0
    return dict(
        r=r, phi=phi, theta=theta, vpar=vpar, bmu=bmu, u_r=vr / b, u_perp=vperp / b
    )


def invariant_series(traj: Trajectory, fm: FieldModel) -> dict:
    """Named invariant series for one run: energy, kinetic, bmu, mu, r."""
    view = augmented_view(traj, fm)
    t = traj.times
    r, theta, phi = view["r"], view["theta"], view["phi"]
    if traj.kind == "cartesian":
        v = traj.states[:, 3:6]
        kinetic = np.einsum("ij,ij->i", v, v) / 2.0
    else:
        kinetic = view["vpar"] ** 2 / 2.0 + view["bmu"]
    if not fm.has_potential:
        raise MissingPotential(f"{fm.model_id} has no electrostatic potential")
    energy = kinetic + np.asarray(fm.potential(r, theta, phi), dtype=float)
    b = np.asarray(fm.magnetic(r, theta)[0], dtype=float)
    mu = view["bmu"] / b
    return {
        "energy": InvariantSeries("energy", t, energy),
        "kinetic": InvariantSeries("kinetic", t, kinetic),
        "bmu": InvariantSeries("bmu", t, view["bmu"]),
        "mu": InvariantSeries("mu", t, mu),
        "r": InvariantSeries("r", t, view["r"]),
    }


def rz_projection(traj: Trajectory) -> np.ndarray:
    """Per-sample (R, z) = (R0 + r cos(theta), r sin(theta)) projection."""
    if traj.kind == "cartesian":
        s = traj.states
        return np.column_stack([np.hypot(s[:, 0], s[:, 1]), s[:, 2]])
    s = traj.states
    if traj.kind == "toroidal6":
        r, theta = s[:, 0], s[:, 1]
    else:
        r, theta = s[:, 0], s[:, 2]
    return np.column_stack([traj.r0_major + r * np.cos(theta), r * np.sin(theta)])

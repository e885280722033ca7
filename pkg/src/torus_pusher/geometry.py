"""Toroidal coordinates, moving frames, and velocity-frame conversions.

Positions on the torus are parametrized by a minor radius r, a poloidal
angle theta and a toroidal angle phi through

    x = (R cos(phi), R sin(phi), r sin(theta)),   R = R0 + r cos(theta).

Angles are kept unwrapped (real-valued) throughout trajectory data so
that time series stay continuous; only the inverse map reduces them to
(-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TorusParams",
    "ToroidalPoint",
    "CartesianPoint",
    "FrameTriplet",
    "toroidal_to_cartesian",
    "cartesian_to_toroidal",
    "coordinate_frame",
    "field_aligned_frame",
    "velocity_to_field_frame",
    "velocity_from_field_frame",
]


@dataclass(frozen=True)
class TorusParams:
    """Torus geometry: the major radius R0 (> 0)."""

    R0: float = 1.75

    def __post_init__(self):
        if not self.R0 > 0.0:
            raise ValueError(f"major radius must be positive, got {self.R0}")


@dataclass(frozen=True)
class ToroidalPoint:
    """Point in toroidal coordinates (r, theta, phi) with 0 < r < R0.

    Angles are unwrapped reals; the r bound keeps R = R0 + r cos(theta)
    positive for every theta.
    """

    r: float
    theta: float
    phi: float

    def validate(self, tp: TorusParams) -> "ToroidalPoint":
        if not 0.0 < self.r < tp.R0:
            raise DomainError(f"minor radius {self.r} outside (0, {tp.R0})")
        return self


@dataclass(frozen=True)
class CartesianPoint:
    """Cartesian position (x, y, z)."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class FrameTriplet:
    """Three orthonormal vectors in Cartesian components.

    Holds either the coordinate triplet (e_r, e_theta, e_phi) or the
    field-aligned triplet (e_r, e_perp, e_par).  The latter is direct
    (determinant +1); the coordinate triplet as conventionally written
    has determinant -1.
    """

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    def determinant(self) -> float:
        return float(np.linalg.det(np.stack([self.e1, self.e2, self.e3])))

    def max_orthonormality_defect(self) -> float:
        m = np.stack([self.e1, self.e2, self.e3])
        return float(np.max(np.abs(m @ m.T - np.eye(3))))


def toroidal_to_cartesian(p: ToroidalPoint, tp: TorusParams) -> CartesianPoint:
    """Map (r, theta, phi) to the Cartesian position on the torus."""
    p.validate(tp)
    big_r = tp.R0 + p.r * math.cos(p.theta)
    return CartesianPoint(
        big_r * math.cos(p.phi),
        big_r * math.sin(p.phi),
        p.r * math.sin(p.theta),
    )


def cartesian_to_toroidal(x: CartesianPoint, tp: TorusParams) -> ToroidalPoint:
    """Invert the torus map; angles are returned in (-pi, pi].

    Raises
    ------
    DomainError
        If the recovered minor radius is outside (0, R0), or if the
        point sits on the torus axis (x = y = 0, phi undefined) or on
        the degenerate circle r = 0 (theta undefined).
    """
    rho = math.hypot(x.x, x.y)
    if rho == 0.0:
        raise DomainError("toroidal angle undefined on the z-axis (x = y = 0)")
    u = rho - tp.R0
    r = math.hypot(u, x.z)
    if r == 0.0:
        raise DomainError("poloidal angle undefined on the circle r = 0")
    if not r < tp.R0:
        raise DomainError(f"recovered minor radius {r} outside (0, {tp.R0})")
    theta = math.atan2(x.z, u)
    phi = math.atan2(x.y, x.x)
    return ToroidalPoint(r, theta, phi)


def coordinate_frame(theta: float, phi: float) -> FrameTriplet:
    """Unit vectors (e_r, e_theta, e_phi) attached to the angles."""
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    e_r = np.array([ct * cp, ct * sp, st])
    e_t = np.array([-st * cp, -st * sp, ct])
    e_p = np.array([-sp, cp, 0.0])
    return FrameTriplet(e_r, e_t, e_p)


def field_aligned_frame(omega: float, theta: float, phi: float) -> FrameTriplet:
    """Direct orthonormal triplet (e_r, e_perp, e_par) for pitch angle omega.

    e_par = cos(omega) e_phi + sin(omega) e_theta is the magnetic field
    direction; e_perp = sin(omega) e_phi - cos(omega) e_theta completes
    the frame with determinant +1.
    """
    base = coordinate_frame(theta, phi)
    co, so = math.cos(omega), math.sin(omega)
    e_par = co * base.e3 + so * base.e2
    e_perp = so * base.e3 - co * base.e2
    return FrameTriplet(base.e1, e_perp, e_par)


def velocity_to_field_frame(v, omega: float, theta: float, phi: float):
    """Project a Cartesian vector onto (e_r, e_perp, e_par).

    Returns the components (v_r, v_perp, v_par); the Euclidean norm is
    preserved by orthonormality.
    """
    frame = field_aligned_frame(omega, theta, phi)
    v = np.asarray(v, dtype=float)
    return (
        float(v @ frame.e1),
        float(v @ frame.e2),
        float(v @ frame.e3),
    )


def velocity_from_field_frame(
    v_r: float, v_perp: float, v_par: float, omega: float, theta: float, phi: float
) -> np.ndarray:
    """Rebuild the Cartesian vector from field-frame components."""
    frame = field_aligned_frame(omega, theta, phi)
    return v_r * frame.e1 + v_perp * frame.e2 + v_par * frame.e3

"""Electromagnetic field models and the pointwise coefficient bundle.

A field model supplies the magnetic magnitude b(r, theta) > 0, the pitch
angle omega(r, theta) of the field direction

    B = b * (cos(omega) e_phi + sin(omega) e_theta),

their analytic partial derivatives, the electric field in the
field-aligned frame, and (optionally) an electrostatic potential with
E = -grad(potential).

Both bundled models are axisymmetric with R*B_theta a function of r
alone, which makes them divergence-free by construction.  Partial
derivatives are supplied in closed form: finite differences would leak
noise into the stiff coefficient bundle and corrupt convergence-order
measurements.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .errors import DegenerateField, DomainError, MissingPotential
from .geometry import TorusParams, ToroidalPoint

__all__ = [
    "FieldEval",
    "GeometryCoefficients",
    "FieldModel",
    "ScrewFieldParams",
    "SolovevFieldParams",
    "ScrewField",
    "SolovevField",
    "screw_field_eval",
    "solovev_field_eval",
    "coefficients",
    "divergence_check",
]

DEFAULT_R_MIN = 1e-6
DEFAULT_R_MARGIN = 1e-3


@dataclass(frozen=True)
class FieldEval:
    """Pointwise field data at (r, theta, phi)."""

    b: float
    omega: float
    db_dr: float
    db_dtheta: float
    domega_dr: float
    domega_dtheta: float
    E_r: float
    E_perp: float
    E_par: float
    potential: float | None


@dataclass(frozen=True)
class GeometryCoefficients:
    """The dimensionless coefficient bundle at a point.

    With omega = 0 and domega_dtheta = 0 the bundle reduces to
    alpha = -sin(theta)/R, beta = 0, gamma_c = -cos(theta)/R, delta = 0,
    zeta = 1/r, eta = 0.  gamma_c is named to avoid a clash with the
    SDIRK constant used by the integrators.
    """

    alpha: float
    beta: float
    gamma_c: float
    delta: float
    zeta: float
    eta: float
    kappa: float
    lam: float
    domega_dr: float
    R: float
    b: float


@dataclass(frozen=True)
class ScrewFieldParams:
    """Screw-pinch strengths: B_theta = B1*r/R, B_phi = B0/R."""

    B0: float = 50.0
    B1: float = 10.0

    def __post_init__(self):
        if not self.B0 > 0.0:
            raise DegenerateField(f"B0 must be positive, got {self.B0}")


@dataclass(frozen=True)
class SolovevFieldParams:
    """Solov'ev equilibrium: psi = psi_scale*(r^2/2 - r^3/3), potential =
    potential_scale * psi."""

    B0: float = 50.0
    psi_scale: float = 5.0
    potential_scale: float = -2.0

    def __post_init__(self):
        if not self.B0 > 0.0:
            raise DegenerateField(f"B0 must be positive, got {self.B0}")


class FieldModel(ABC):
    """Contract for electromagnetic field models on the torus.

    Subclasses provide ``magnetic``, ``electric`` and ``potential``;
    the bundled models additionally carry a compiled (kind, params)
    binding used by the time-stepping kernels.
    """

    kind: int | None = None  # kernel binding; None for pure-Python models

    def __init__(self, torus: TorusParams, r_min=DEFAULT_R_MIN, r_margin=DEFAULT_R_MARGIN):
        self.torus = torus
        self.r_lo = float(r_min)
        self.r_hi = torus.R0 - float(r_margin)
        if not self.r_lo < self.r_hi:
            raise ValueError("empty radial domain")
        self.params = None

    # -- required evaluations -------------------------------------------------

    @abstractmethod
    def magnetic(self, r, theta):
        """(b, omega, db_dr, db_dtheta, domega_dr, domega_dtheta); accepts arrays."""

    @abstractmethod
    def electric(self, r, theta, phi):
        """(E_r, E_perp, E_par) in the field-aligned frame; accepts arrays."""

    def potential(self, r, theta, phi):
        """Electrostatic potential with E = -grad(potential)."""
        raise MissingPotential(f"{self.model_id} has no electrostatic potential")

    @property
    def has_potential(self):
        return True

    @property
    def model_id(self) -> str:
        return type(self).__name__

    # -- common machinery ------------------------------------------------------

    @property
    def is_compiled(self) -> bool:
        return self.kind is not None and self.params is not None

    def check_domain(self, r):
        if not (self.r_lo <= r <= self.r_hi):
            raise DomainError(
                f"r = {r} outside the field domain [{self.r_lo}, {self.r_hi}]"
            )

    def eval(self, p: ToroidalPoint) -> FieldEval:
        """Full field bundle at a point; validates the radial domain."""
        self.check_domain(p.r)
        b, omega, db_dr, db_dth, dom_dr, dom_dth = self.magnetic(p.r, p.theta)
        if not b > 0.0:
            raise DegenerateField(f"b = {b} at r={p.r}, theta={p.theta}")
        e_r, e_p, e_par = self.electric(p.r, p.theta, p.phi)
        pot = self.potential(p.r, p.theta, p.phi) if self.has_potential else None
        return FieldEval(
            float(b), float(omega), float(db_dr), float(db_dth),
            float(dom_dr), float(dom_dth), float(e_r), float(e_p), float(e_par), pot,
        )

    def coefficients(self, p: ToroidalPoint) -> GeometryCoefficients:
        return coefficients(self, p)


class _UnifiedModel(FieldModel):
    """Shared closed forms for models with R*B_theta = P(r), B_phi = B0/R."""

    def _poloidal(self, r):
        """(P, dP/dr) with P = R*B_theta."""
        raise NotImplementedError

    def magnetic(self, r, theta):
        big_r = self.torus.R0 + r * np.cos(theta)
        b0 = self._b0
        p, dp = self._poloidal(r)
        s = np.sqrt(b0 * b0 + p * p)
        b = s / big_r
        omega = np.arctan2(p, b0)
        db_dr = p * dp / (s * big_r) - s * np.cos(theta) / (big_r * big_r)
        db_dth = s * r * np.sin(theta) / (big_r * big_r)
        dom_dr = dp * b0 / (s * s)
        dom_dth = 0.0 * b
        return b, omega, db_dr, db_dth, dom_dr, dom_dth


class ScrewField(_UnifiedModel):
    """Screw-pinch test field with zero electric field."""

    kind = k.KIND_SCREW

    def __init__(self, params: ScrewFieldParams = ScrewFieldParams(),
                 torus: TorusParams = TorusParams(),
                 r_min=DEFAULT_R_MIN, r_margin=DEFAULT_R_MARGIN):
        super().__init__(torus, r_min, r_margin)
        self.field_params = params
        self._b0 = params.B0
        self.params = np.array(
            [torus.R0, self.r_lo, self.r_hi, params.B0, params.B1, 0.0]
        )

    @property
    def model_id(self):
        return "screw"

    def _poloidal(self, r):
        b1 = self.field_params.B1
        return b1 * r, b1 + 0.0 * np.asarray(r, dtype=float)

    def electric(self, r, theta, phi):
        zero = 0.0 * np.asarray(r, dtype=float)
        return zero, zero, zero

    def potential(self, r, theta, phi):
        return 0.0 * np.asarray(r, dtype=float)


class SolovevField(_UnifiedModel):
    """Tokamak-like Solov'ev equilibrium with a compatible radial potential."""

    kind = k.KIND_SOLOVEV

    def __init__(self, params: SolovevFieldParams = SolovevFieldParams(),
                 torus: TorusParams = TorusParams(),
                 r_min=DEFAULT_R_MIN, r_margin=DEFAULT_R_MARGIN):
        super().__init__(torus, r_min, r_margin)
        self.field_params = params
        self._b0 = params.B0
        self.params = np.array(
            [torus.R0, self.r_lo, self.r_hi, params.B0, params.psi_scale,
             params.potential_scale]
        )

    @property
    def model_id(self):
        return "solovev"

    def psi(self, r):
        return self.field_params.psi_scale * (r * r / 2.0 - r * r * r / 3.0)

    def _poloidal(self, r):
        ps = self.field_params.psi_scale
        return ps * r * (1.0 - r), ps * (1.0 - 2.0 * r)

    def electric(self, r, theta, phi):
        dpsi = self._poloidal(r)[0]
        zero = 0.0 * np.asarray(r, dtype=float)
        return -self.field_params.potential_scale * dpsi, zero, zero

    def potential(self, r, theta, phi):
        return self.field_params.potential_scale * self.psi(r)


def screw_field_eval(p: ToroidalPoint, sp: ScrewFieldParams, tp: TorusParams) -> FieldEval:
    """One-shot screw-field bundle at a point."""
    return ScrewField(sp, tp).eval(p)


def solovev_field_eval(p: ToroidalPoint, sp: SolovevFieldParams, tp: TorusParams) -> FieldEval:
    """One-shot Solov'ev bundle at a point."""
    return SolovevField(sp, tp).eval(p)


def coefficients(fm: FieldModel, p: ToroidalPoint) -> GeometryCoefficients:
    """Pointwise coefficient bundle at p.

    Compiled models go through the same kernel the integrators use;
    pure-Python models are served by the identical formulas below.
    """
    fm.check_domain(p.r)
    if fm.is_compiled:
        out = k.coeffs_eval(fm.kind, fm.params, p.r, p.theta)
        return GeometryCoefficients(*out[:11])
    b, omega, db_dr, db_dth, dom_dr, dom_dth = (
        float(v) for v in fm.magnetic(p.r, p.theta)
    )
    if not b > 0.0:
        raise DegenerateField(f"b = {b} at r={p.r}, theta={p.theta}")
    r = p.r
    big_r = fm.torus.R0 + r * math.cos(p.theta)
    co, so = math.cos(omega), math.sin(omega)
    ct, st = math.cos(p.theta), math.sin(p.theta)
    return GeometryCoefficients(
        alpha=-dom_dth / r * so - st / big_r * co,
        beta=dom_dth / r * co - st / big_r * so,
        gamma_c=-so * so / r - ct / big_r * co * co,
        delta=-(ct / big_r - 1.0 / r) * so * co,
        zeta=co * co / r + ct / big_r * so * so,
        eta=-so / r * (db_dth / b),
        kappa=co / r * (db_dth / b),
        lam=-db_dr / b,
        domega_dr=dom_dr,
        R=big_r,
        b=b,
    )


def divergence_check(fm: FieldModel, p: ToroidalPoint) -> float:
    """Gauss-law residual in (b, omega) form.

    Zero (to round-off) for any field with R*B_theta independent of
    theta, which covers both bundled models.
    """
    fm.check_domain(p.r)
    b, omega, db_dr, db_dth, dom_dr, dom_dth = (
        float(v) for v in fm.magnetic(p.r, p.theta)
    )
    big_r = fm.torus.R0 + p.r * math.cos(p.theta)
    so, co = math.sin(omega), math.cos(omega)
    return so / p.r * db_dth + b * (
        co * dom_dth / p.r - so * math.sin(p.theta) / big_r
    )

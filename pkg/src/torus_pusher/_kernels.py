"""Compiled scalar kernels: field evaluation, right-hand sides, steppers.

Every kernel works on plain floats plus a flat parameter vector so that
numba can compile the whole stepping loop.  Field models are encoded as
(kind, params) with

    params = [R0, r_lo, r_hi, B0, B1_or_psi_scale, potential_scale]

Both bundled models share the structure R*B_theta = P(r), B_phi = B0/R:
the screw pinch has P(r) = B1*r, the Solov'ev equilibrium has
P(r) = psi'(r) = psi_scale*r*(1 - r).

Slow states are ordered (r, phi, theta, vpar, bmu); the fast pair is
(u_r, u_perp); augmented arrays concatenate both (7 slots).  Full
toroidal states are (r, theta, phi, v_r, v_theta, v_phi); Cartesian
states are (x, y, z, vx, vy, vz).
"""

import math

import numpy as np
from numba import njit

KIND_SCREW = 0
KIND_SOLOVEV = 1

# smallest root of X^2 - 2X + 1/2, the L-stable two-stage SDIRK constant
SDIRK_GAMMA = 1.0 - 1.0 / math.sqrt(2.0)
SDIRK_STAGE_OFFSET = 1.0 / (2.0 * SDIRK_GAMMA)
SDIRK_BLEND = 1.0 / (2.0 * SDIRK_GAMMA * SDIRK_GAMMA)

# driver status codes
OK = 0
OUT_OF_DOMAIN = 1

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def domain_ok(fp, r):
    # NaN-safe: any comparison with NaN is False
    return fp[1] <= r <= fp[2]


@njit(**_JIT)
def mag_eval(kind, fp, r, theta):
    """Magnetic bundle (b, omega, db_dr, db_dtheta, domega_dr, domega_dtheta)."""
    big_r = fp[0] + r * math.cos(theta)
    b0 = fp[3]
    if kind == KIND_SCREW:
        p = fp[4] * r
        dp = fp[4]
    else:
        p = fp[4] * r * (1.0 - r)
        dp = fp[4] * (1.0 - 2.0 * r)
    s = math.sqrt(b0 * b0 + p * p)
    b = s / big_r
    omega = math.atan2(p, b0)
    db_dr = p * dp / (s * big_r) - s * math.cos(theta) / (big_r * big_r)
    db_dth = s * r * math.sin(theta) / (big_r * big_r)
    dom_dr = dp * b0 / (s * s)
    dom_dth = 0.0
    return b, omega, db_dr, db_dth, dom_dr, dom_dth


@njit(**_JIT)
def efield_eval(kind, fp, r, theta, phi):
    """Electric field components (E_r, E_perp, E_par) in the field frame."""
    if kind == KIND_SCREW:
        return 0.0, 0.0, 0.0
    # E = -grad(pot_scale * psi) is purely radial
    dpsi = fp[4] * r * (1.0 - r)
    return -fp[5] * dpsi, 0.0, 0.0


@njit(**_JIT)
def potential_eval(kind, fp, r, theta, phi):
    if kind == KIND_SCREW:
        return 0.0
    psi = fp[4] * (r * r / 2.0 - r * r * r / 3.0)
    return fp[5] * psi


@njit(**_JIT)
def coeffs_eval(kind, fp, r, theta):
    """Pointwise coefficient bundle.

    Returns (alpha, beta, gamma_c, delta, zeta, eta, kappa, lam,
    domega_dr, R, b, omega).
    """
    b, omega, db_dr, db_dth, dom_dr, dom_dth = mag_eval(kind, fp, r, theta)
    big_r = fp[0] + r * math.cos(theta)
    co = math.cos(omega)
    so = math.sin(omega)
    ct = math.cos(theta)
    st = math.sin(theta)
    alpha = -dom_dth / r * so - st / big_r * co
    beta = dom_dth / r * co - st / big_r * so
    gamma_c = -so * so / r - ct / big_r * co * co
    delta = -(ct / big_r - 1.0 / r) * so * co
    zeta = co * co / r + ct / big_r * so * so
    eta = -so / r * (db_dth / b)
    kappa = co / r * (db_dth / b)
    lam = -db_dr / b
    return alpha, beta, gamma_c, delta, zeta, eta, kappa, lam, dom_dr, big_r, b, omega


@njit(**_JIT)
def fpar_eval(b, alpha, beta, gamma_c, delta, dom_dr, vpar, bmu, ur, up):
    """Parallel force; written so that every u-dependent term vanishes
    exactly (bitwise) at u = 0, leaving beta*bmu."""
    return (
        b * (gamma_c * ur + alpha * up) * vpar
        + b * b * (delta - dom_dr) * up * ur
        + beta * (bmu + b * b * (up * up - ur * ur) * 0.5)
    )


@njit(**_JIT)
def slow_rhs_eval(kind, fp, t, r, phi, theta, vpar, bmu, ur, up):
    """Slow right-hand side F(t, Z, u_perp), five components."""
    alpha, beta, gamma_c, delta, zeta, eta, kappa, lam, dom_dr, big_r, b, omega = (
        coeffs_eval(kind, fp, r, theta)
    )
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    co = math.cos(omega)
    so = math.sin(omega)
    fpar = fpar_eval(b, alpha, beta, gamma_c, delta, dom_dr, vpar, bmu, ur, up)
    return (
        b * ur,
        (co * vpar + b * so * up) / big_r,
        (so * vpar - b * co * up) / r,
        e_par + fpar,
        -vpar * fpar + b * (e_r * ur + e_p * up),
    )


@njit(**_JIT)
def uperp_eval(kind, fp, t, r, phi, theta, vpar, bmu, ur, up):
    """Transverse source U_perp(t, Z, u_perp) = (U_r, U_perp)."""
    alpha, beta, gamma_c, delta, zeta, eta, kappa, lam, dom_dr, big_r, b, omega = (
        coeffs_eval(kind, fp, r, theta)
    )
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    mu = bmu / b
    half = b * (up * up - ur * ur) * 0.5
    u_r = (
        e_p / b
        - alpha / b * vpar * vpar
        + (dom_dr + delta) * vpar * ur
        + (eta - beta) * vpar * up
        + b * (lam - zeta) * ur * up
        + kappa * (mu + half)
    )
    u_p = (
        -e_r / b
        + 2.0 * delta * vpar * up
        - zeta * b * up * up
        + gamma_c / b * vpar * vpar
        - eta * ur * vpar
        - kappa * ur * up
        - lam * (mu - half)
    )
    return u_r, u_p


@njit(**_JIT)
def limit_drift_eval(kind, fp, t, r, phi, theta, vpar, bmu):
    """Leading transverse drift (Ubar_r, Ubar_perp)."""
    alpha, beta, gamma_c, delta, zeta, eta, kappa, lam, dom_dr, big_r, b, omega = (
        coeffs_eval(kind, fp, r, theta)
    )
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    ub_r = e_p - alpha * vpar * vpar + kappa * bmu
    ub_p = -e_r + gamma_c * vpar * vpar - lam * bmu
    return ub_r, ub_p


@njit(**_JIT)
def order2_rhs_eval(kind, fp, eps, t, r, phi, theta, vpar, bmu):
    """Effective second-order system: F evaluated at the equilibrium of the
    fast equation, u = (eps/b) U_perp(t, Z, 0) = eps * Ubar / b^2.

    (Ubar here is the b-free drift of limit_drift_eval; the fast-variable
    equilibrium carries two factors of 1/b: one from u = v/b, one from
    the 1/b inside U_perp.)
    """
    b = mag_eval(kind, fp, r, theta)[0]
    ub_r, ub_p = limit_drift_eval(kind, fp, t, r, phi, theta, vpar, bmu)
    return slow_rhs_eval(
        kind, fp, t, r, phi, theta, vpar, bmu,
        eps * ub_r / (b * b), eps * ub_p / (b * b),
    )


@njit(**_JIT)
def order2_rhs_explicit(kind, fp, eps, t, r, phi, theta, vpar, bmu):
    """Long-hand expansion of the effective system (independent code path).

    Written in terms of the drift velocity (w_r, w_p) = Ubar / b and
    including the O(eps^2) completion, so that it agrees with the
    composition path to round-off at any eps.
    """
    alpha, beta, gamma_c, delta, zeta, eta, kappa, lam, dom_dr, big_r, b, omega = (
        coeffs_eval(kind, fp, r, theta)
    )
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    co = math.cos(omega)
    so = math.sin(omega)
    w_r = (e_p - alpha * vpar * vpar + kappa * bmu) / b
    w_p = (-e_r + gamma_c * vpar * vpar - lam * bmu) / b
    g = (gamma_c * w_r + alpha * w_p) * vpar
    extra = eps * eps * (
        (delta - dom_dr) * w_p * w_r + beta * (w_p * w_p - w_r * w_r) * 0.5
    )
    return (
        eps * w_r,
        (co * vpar + eps * so * w_p) / big_r,
        (so * vpar - eps * co * w_p) / r,
        e_par + beta * bmu + eps * g + extra,
        -vpar * (beta * bmu + eps * g + extra) + eps * (e_r * w_r + e_p * w_p),
    )


@njit(**_JIT)
def tor6_rhs_eval(kind, fp, eps, t, r, theta, phi, vr, vth, vph):
    """Full stiff motion in toroidal coordinates (B_r = 0)."""
    b, omega, db_dr, db_dth, dom_dr, dom_dth = mag_eval(kind, fp, r, theta)
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    big_r = fp[0] + r * math.cos(theta)
    co = math.cos(omega)
    so = math.sin(omega)
    b_th = b * so
    b_ph = b * co
    e_th = so * e_par - co * e_p
    e_ph = co * e_par + so * e_p
    ct = math.cos(theta)
    st = math.sin(theta)
    return (
        vr,
        vth / r,
        vph / big_r,
        (vph * b_th - vth * b_ph) / eps + e_r + vth * vth / r + ct * vph * vph / big_r,
        vr * b_ph / eps + e_th - vr * vth / r - st * vph * vph / big_r,
        -vr * b_th / eps + e_ph - ct * vr * vph / big_r + st * vth * vph / big_r,
    )


@njit(**_JIT)
def cart_to_tor(fp, x, y, z):
    """Invert the torus map; ok = False off the chart or out of domain."""
    rho = math.hypot(x, y)
    if rho == 0.0:
        return False, 0.0, 0.0, 0.0
    u = rho - fp[0]
    r = math.hypot(u, z)
    if not domain_ok(fp, r):
        return False, r, 0.0, 0.0
    return True, r, math.atan2(z, u), math.atan2(y, x)


@njit(**_JIT)
def em_cartesian(kind, fp, x, y, z):
    """Cartesian (B, E) vectors at a Cartesian position."""
    ok, r, theta, phi = cart_to_tor(fp, x, y, z)
    if not ok:
        return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    b, omega, db_dr, db_dth, dom_dr, dom_dth = mag_eval(kind, fp, r, theta)
    e_r, e_p, e_par = efield_eval(kind, fp, r, theta, phi)
    ct = math.cos(theta)
    st = math.sin(theta)
    cp = math.cos(phi)
    sp = math.sin(phi)
    co = math.cos(omega)
    so = math.sin(omega)
    # e_par = co*e_phi + so*e_theta, e_perp = so*e_phi - co*e_theta
    par_x = co * (-sp) + so * (-st * cp)
    par_y = co * cp + so * (-st * sp)
    par_z = so * ct
    perp_x = so * (-sp) - co * (-st * cp)
    perp_y = so * cp - co * (-st * sp)
    perp_z = -co * ct
    bx = b * par_x
    by = b * par_y
    bz = b * par_z
    ex = e_r * ct * cp + e_p * perp_x + e_par * par_x
    ey = e_r * ct * sp + e_p * perp_y + e_par * par_y
    ez = e_r * st + e_p * perp_z + e_par * par_z
    return True, bx, by, bz, ex, ey, ez


@njit(**_JIT)
def _solve2(a, wr, wp):
    """Closed-form (Id - a*J0)^{-1} w; determinant 1 + a^2 never vanishes."""
    det = 1.0 + a * a
    return (wr + a * wp) / det, (wp - a * wr) / det


@njit(**_JIT)
def imex1_step(kind, fp, eps, dt, t, r, phi, theta, vpar, bmu, ur, up):
    """Backward/forward Euler combination on the augmented system."""
    b = mag_eval(kind, fp, r, theta)[0]
    u_r0, u_p0 = uperp_eval(kind, fp, t, r, phi, theta, vpar, bmu, ur, up)
    # J0 (U_r, U_p) = (U_p, -U_r)
    wr = ur - dt * u_p0
    wp = up + dt * u_r0
    ur1, up1 = _solve2(b * dt / eps, wr, wp)
    f0, f1, f2, f3, f4 = slow_rhs_eval(
        kind, fp, t, r, phi, theta, vpar, bmu, ur1, up1
    )
    return (
        r + dt * f0,
        phi + dt * f1,
        theta + dt * f2,
        vpar + dt * f3,
        bmu + dt * f4,
        ur1,
        up1,
    )


@njit(**_JIT)
def imex2_step(kind, fp, eps, dt, t, r, phi, theta, vpar, bmu, ur, up):
    """Two-stage IMEX scheme: explicit RK blend + L-stable SDIRK stiff part."""
    g = SDIRK_GAMMA
    c = SDIRK_BLEND
    b_n = mag_eval(kind, fp, r, theta)[0]
    u_r0, u_p0 = uperp_eval(kind, fp, t, r, phi, theta, vpar, bmu, ur, up)

    # stage 1: implicit 2x2 solve, then explicit slow update
    wr = ur - g * dt * u_p0
    wp = up + g * dt * u_r0
    ur1, up1 = _solve2(g * b_n * dt / eps, wr, wp)
    f10, f11, f12, f13, f14 = slow_rhs_eval(
        kind, fp, t, r, phi, theta, vpar, bmu, ur1, up1
    )
    z1_r = r + g * dt * f10
    z1_phi = phi + g * dt * f11
    z1_theta = theta + g * dt * f12
    z1_vpar = vpar + g * dt * f13
    z1_bmu = bmu + g * dt * f14

    # extrapolated hat state and stage time t^n + dt/(2 gamma)
    h_r = (1.0 - c) * r + c * z1_r
    h_phi = (1.0 - c) * phi + c * z1_phi
    h_theta = (1.0 - c) * theta + c * z1_theta
    h_vpar = (1.0 - c) * vpar + c * z1_vpar
    h_bmu = (1.0 - c) * bmu + c * z1_bmu
    h_ur = (1.0 - c) * ur + c * ur1
    h_up = (1.0 - c) * up + c * up1
    t_hat = t + dt * SDIRK_STAGE_OFFSET

    # stage 2
    b_h = mag_eval(kind, fp, h_r, h_theta)[0]
    uh_r, uh_p = uperp_eval(
        kind, fp, t_hat, h_r, h_phi, h_theta, h_vpar, h_bmu, h_ur, h_up
    )
    t_r = (1.0 - g) * (u_r0 - b_n * ur1 / eps) + g * uh_r
    t_p = (1.0 - g) * (u_p0 - b_n * up1 / eps) + g * uh_p
    wr = ur - dt * t_p
    wp = up + dt * t_r
    ur2, up2 = _solve2(g * b_h * dt / eps, wr, wp)
    f20, f21, f22, f23, f24 = slow_rhs_eval(
        kind, fp, t_hat, h_r, h_phi, h_theta, h_vpar, h_bmu, ur2, up2
    )
    return (
        r + dt * ((1.0 - g) * f10 + g * f20),
        phi + dt * ((1.0 - g) * f11 + g * f21),
        theta + dt * ((1.0 - g) * f12 + g * f22),
        vpar + dt * ((1.0 - g) * f13 + g * f23),
        bmu + dt * ((1.0 - g) * f14 + g * f24),
        ur2,
        up2,
    )


@njit(**_JIT)
def limit1_step(kind, fp, dt, t, r, phi, theta, vpar, bmu):
    """Forward Euler on the first-order limit model (u_perp = 0)."""
    f0, f1, f2, f3, f4 = slow_rhs_eval(
        kind, fp, t, r, phi, theta, vpar, bmu, 0.0, 0.0
    )
    return r + dt * f0, phi + dt * f1, theta + dt * f2, vpar + dt * f3, bmu + dt * f4


@njit(**_JIT)
def limit1_eff_step(kind, fp, eps, dt, t, r, phi, theta, vpar, bmu):
    """Forward Euler on the effective second-order model."""
    f0, f1, f2, f3, f4 = order2_rhs_eval(kind, fp, eps, t, r, phi, theta, vpar, bmu)
    return r + dt * f0, phi + dt * f1, theta + dt * f2, vpar + dt * f3, bmu + dt * f4


@njit(**_JIT)
def limit2_step(kind, fp, dt, t, r, phi, theta, vpar, bmu):
    """Two-stage explicit rule (weights 1-gamma, gamma) on the limit model."""
    g = SDIRK_GAMMA
    f0, f1, f2, f3, f4 = slow_rhs_eval(
        kind, fp, t, r, phi, theta, vpar, bmu, 0.0, 0.0
    )
    s = dt * SDIRK_STAGE_OFFSET
    h0, h1, h2, h3, h4 = slow_rhs_eval(
        kind,
        fp,
        t + s,
        r + s * f0,
        phi + s * f1,
        theta + s * f2,
        vpar + s * f3,
        bmu + s * f4,
        0.0,
        0.0,
    )
    return (
        r + dt * ((1.0 - g) * f0 + g * h0),
        phi + dt * ((1.0 - g) * f1 + g * h1),
        theta + dt * ((1.0 - g) * f2 + g * h2),
        vpar + dt * ((1.0 - g) * f3 + g * h3),
        bmu + dt * ((1.0 - g) * f4 + g * h4),
    )


@njit(**_JIT)
def limit2_eff_step(kind, fp, eps, dt, t, r, phi, theta, vpar, bmu):
    """Two-stage explicit rule on the effective second-order model."""
    g = SDIRK_GAMMA
    f0, f1, f2, f3, f4 = order2_rhs_eval(kind, fp, eps, t, r, phi, theta, vpar, bmu)
    s = dt * SDIRK_STAGE_OFFSET
    h0, h1, h2, h3, h4 = order2_rhs_eval(
        kind,
        fp,
        eps,
        t + s,
        r + s * f0,
        phi + s * f1,
        theta + s * f2,
        vpar + s * f3,
        bmu + s * f4,
    )
    return (
        r + dt * ((1.0 - g) * f0 + g * h0),
        phi + dt * ((1.0 - g) * f1 + g * h1),
        theta + dt * ((1.0 - g) * f2 + g * h2),
        vpar + dt * ((1.0 - g) * f3 + g * h3),
        bmu + dt * ((1.0 - g) * f4 + g * h4),
    )


@njit(**_JIT)
def rk4_tor6_step(kind, fp, eps, dt, t, s0, s1, s2, s3, s4, s5):
    """Classical RK4 on the full toroidal system."""
    a0, a1, a2, a3, a4, a5 = tor6_rhs_eval(kind, fp, eps, t, s0, s1, s2, s3, s4, s5)
    h = 0.5 * dt
    b0, b1, b2, b3, b4, b5 = tor6_rhs_eval(
        kind, fp, eps, t + h,
        s0 + h * a0, s1 + h * a1, s2 + h * a2, s3 + h * a3, s4 + h * a4, s5 + h * a5,
    )
    c0, c1, c2, c3, c4, c5 = tor6_rhs_eval(
        kind, fp, eps, t + h,
        s0 + h * b0, s1 + h * b1, s2 + h * b2, s3 + h * b3, s4 + h * b4, s5 + h * b5,
    )
    d0, d1, d2, d3, d4, d5 = tor6_rhs_eval(
        kind, fp, eps, t + dt,
        s0 + dt * c0, s1 + dt * c1, s2 + dt * c2, s3 + dt * c3, s4 + dt * c4,
        s5 + dt * c5,
    )
    w = dt / 6.0
    return (
        s0 + w * (a0 + 2.0 * b0 + 2.0 * c0 + d0),
        s1 + w * (a1 + 2.0 * b1 + 2.0 * c1 + d1),
        s2 + w * (a2 + 2.0 * b2 + 2.0 * c2 + d2),
        s3 + w * (a3 + 2.0 * b3 + 2.0 * c3 + d3),
        s4 + w * (a4 + 2.0 * b4 + 2.0 * c4 + d4),
        s5 + w * (a5 + 2.0 * b5 + 2.0 * c5 + d5),
    )


@njit(**_JIT)
def rk4_slow_step(kind, fp, order, eps, dt, t, z0, z1, z2, z3, z4):
    """Classical RK4 on the limit model (order 1) or effective model (order 2)."""
    if order == 1:
        a0, a1, a2, a3, a4 = slow_rhs_eval(kind, fp, t, z0, z1, z2, z3, z4, 0.0, 0.0)
    else:
        a0, a1, a2, a3, a4 = order2_rhs_eval(kind, fp, eps, t, z0, z1, z2, z3, z4)
    h = 0.5 * dt
    if order == 1:
        b0, b1, b2, b3, b4 = slow_rhs_eval(
            kind, fp, t + h,
            z0 + h * a0, z1 + h * a1, z2 + h * a2, z3 + h * a3, z4 + h * a4, 0.0, 0.0,
        )
    else:
        b0, b1, b2, b3, b4 = order2_rhs_eval(
            kind, fp, eps, t + h,
            z0 + h * a0, z1 + h * a1, z2 + h * a2, z3 + h * a3, z4 + h * a4,
        )
    if order == 1:
        c0, c1, c2, c3, c4 = slow_rhs_eval(
            kind, fp, t + h,
            z0 + h * b0, z1 + h * b1, z2 + h * b2, z3 + h * b3, z4 + h * b4, 0.0, 0.0,
        )
    else:
        c0, c1, c2, c3, c4 = order2_rhs_eval(
            kind, fp, eps, t + h,
            z0 + h * b0, z1 + h * b1, z2 + h * b2, z3 + h * b3, z4 + h * b4,
        )
    if order == 1:
        d0, d1, d2, d3, d4 = slow_rhs_eval(
            kind, fp, t + dt,
            z0 + dt * c0, z1 + dt * c1, z2 + dt * c2, z3 + dt * c3, z4 + dt * c4,
            0.0, 0.0,
        )
    else:
        d0, d1, d2, d3, d4 = order2_rhs_eval(
            kind, fp, eps, t + dt,
            z0 + dt * c0, z1 + dt * c1, z2 + dt * c2, z3 + dt * c3, z4 + dt * c4,
        )
    w = dt / 6.0
    return (
        z0 + w * (a0 + 2.0 * b0 + 2.0 * c0 + d0),
        z1 + w * (a1 + 2.0 * b1 + 2.0 * c1 + d1),
        z2 + w * (a2 + 2.0 * b2 + 2.0 * c2 + d2),
        z3 + w * (a3 + 2.0 * b3 + 2.0 * c3 + d3),
        z4 + w * (a4 + 2.0 * b4 + 2.0 * c4 + d4),
    )


@njit(**_JIT)
def boris_kick_rotate(kind, fp, eps, dt, x, y, z, vx, vy, vz):
    """Boris velocity update: half electric kick, exact-tangent rotation
    about B(x)/eps, half electric kick.  Fields at the given position."""
    ok, bx, by, bz, ex, ey, ez = em_cartesian(kind, fp, x, y, z)
    if not ok:
        return False, vx, vy, vz
    h = 0.5 * dt
    # v_minus
    vmx = vx + h * ex
    vmy = vy + h * ey
    vmz = vz + h * ez
    tx = h * bx / eps
    ty = h * by / eps
    tz = h * bz / eps
    # v_prime = v_minus + v_minus x t
    vpx = vmx + (vmy * tz - vmz * ty)
    vpy = vmy + (vmz * tx - vmx * tz)
    vpz = vmz + (vmx * ty - vmy * tx)
    f = 2.0 / (1.0 + tx * tx + ty * ty + tz * tz)
    sx = f * tx
    sy = f * ty
    sz = f * tz
    # v_plus = v_minus + v_prime x s
    vqx = vmx + (vpy * sz - vpz * sy)
    vqy = vmy + (vpz * sx - vpx * sz)
    vqz = vmz + (vpx * sy - vpy * sx)
    return True, vqx + h * ex, vqy + h * ey, vqz + h * ez


@njit(**_JIT)
def boris_step(kind, fp, eps, dt, x, y, z, vx, vy, vz):
    ok, wx, wy, wz = boris_kick_rotate(kind, fp, eps, dt, x, y, z, vx, vy, vz)
    if not ok:
        return False, x, y, z, vx, vy, vz
    return True, x + dt * wx, y + dt * wy, z + dt * wz, wx, wy, wz


# ---------------------------------------------------------------------------
# trajectory drivers: loop, sample every `stride` steps plus the final step,
# abort with OUT_OF_DOMAIN when a step leaves the field domain
# ---------------------------------------------------------------------------

SCHEME_LIMIT1 = 0
SCHEME_LIMIT2 = 1
SCHEME_LIMIT1_EFF = 2
SCHEME_LIMIT2_EFF = 3
SCHEME_RK4_ORDER1 = 4
SCHEME_RK4_ORDER2 = 5


@njit(**_JIT)
def drive_augmented(kind, fp, order, eps, dt, t0, nsteps, stride, y, times, out):
    times[0] = t0
    for j in range(7):
        out[0, j] = y[j]
    r, phi, theta, vpar, bmu, ur, up = y[0], y[1], y[2], y[3], y[4], y[5], y[6]
    k = 1
    for n in range(1, nsteps + 1):
        t = t0 + (n - 1) * dt
        if order == 1:
            r, phi, theta, vpar, bmu, ur, up = imex1_step(
                kind, fp, eps, dt, t, r, phi, theta, vpar, bmu, ur, up
            )
        else:
            r, phi, theta, vpar, bmu, ur, up = imex2_step(
                kind, fp, eps, dt, t, r, phi, theta, vpar, bmu, ur, up
            )
        if not domain_ok(fp, r):
            return OUT_OF_DOMAIN, n
        if n % stride == 0 or n == nsteps:
            times[k] = t0 + n * dt
            out[k, 0] = r
            out[k, 1] = phi
            out[k, 2] = theta
            out[k, 3] = vpar
            out[k, 4] = bmu
            out[k, 5] = ur
            out[k, 6] = up
            k += 1
    return OK, nsteps


@njit(**_JIT)
def drive_slow(kind, fp, scheme, eps, dt, t0, nsteps, stride, y, times, out):
    times[0] = t0
    for j in range(5):
        out[0, j] = y[j]
    z0, z1, z2, z3, z4 = y[0], y[1], y[2], y[3], y[4]
    k = 1
    for n in range(1, nsteps + 1):
        t = t0 + (n - 1) * dt
        if scheme == SCHEME_LIMIT1:
            z0, z1, z2, z3, z4 = limit1_step(kind, fp, dt, t, z0, z1, z2, z3, z4)
        elif scheme == SCHEME_LIMIT2:
            z0, z1, z2, z3, z4 = limit2_step(kind, fp, dt, t, z0, z1, z2, z3, z4)
        elif scheme == SCHEME_LIMIT1_EFF:
            z0, z1, z2, z3, z4 = limit1_eff_step(
                kind, fp, eps, dt, t, z0, z1, z2, z3, z4
            )
        elif scheme == SCHEME_LIMIT2_EFF:
            z0, z1, z2, z3, z4 = limit2_eff_step(
                kind, fp, eps, dt, t, z0, z1, z2, z3, z4
            )
        elif scheme == SCHEME_RK4_ORDER1:
            z0, z1, z2, z3, z4 = rk4_slow_step(
                kind, fp, 1, eps, dt, t, z0, z1, z2, z3, z4
            )
        else:
            z0, z1, z2, z3, z4 = rk4_slow_step(
                kind, fp, 2, eps, dt, t, z0, z1, z2, z3, z4
            )
        if not domain_ok(fp, z0):
            return OUT_OF_DOMAIN, n
        if n % stride == 0 or n == nsteps:
            times[k] = t0 + n * dt
            out[k, 0] = z0
            out[k, 1] = z1
            out[k, 2] = z2
            out[k, 3] = z3
            out[k, 4] = z4
            k += 1
    return OK, nsteps


@njit(**_JIT)
def drive_tor6(kind, fp, eps, dt, t0, nsteps, stride, y, times, out):
    times[0] = t0
    for j in range(6):
        out[0, j] = y[j]
    s0, s1, s2, s3, s4, s5 = y[0], y[1], y[2], y[3], y[4], y[5]
    k = 1
    for n in range(1, nsteps + 1):
        t = t0 + (n - 1) * dt
        s0, s1, s2, s3, s4, s5 = rk4_tor6_step(
            kind, fp, eps, dt, t, s0, s1, s2, s3, s4, s5
        )
        if not domain_ok(fp, s0):
            return OUT_OF_DOMAIN, n
        if n % stride == 0 or n == nsteps:
            times[k] = t0 + n * dt
            out[k, 0] = s0
            out[k, 1] = s1
            out[k, 2] = s2
            out[k, 3] = s3
            out[k, 4] = s4
            out[k, 5] = s5
            k += 1
    return OK, nsteps


@njit(**_JIT)
def drive_cartesian(kind, fp, eps, dt, t0, nsteps, stride, staggered, y, times, out):
    times[0] = t0
    for j in range(6):
        out[0, j] = y[j]
    x, yy, z, vx, vy, vz = y[0], y[1], y[2], y[3], y[4], y[5]
    if staggered:
        # shift velocity back half a step for leapfrog alignment
        ok, vx, vy, vz = boris_kick_rotate(
            kind, fp, eps, -0.5 * dt, x, yy, z, vx, vy, vz
        )
        if not ok:
            return OUT_OF_DOMAIN, 0
    k = 1
    for n in range(1, nsteps + 1):
        ok, x, yy, z, vx, vy, vz = boris_step(
            kind, fp, eps, dt, x, yy, z, vx, vy, vz
        )
        if not ok:
            return OUT_OF_DOMAIN, n
        okd, r, theta, phi = cart_to_tor(fp, x, yy, z)
        if not okd:
            return OUT_OF_DOMAIN, n
        if n % stride == 0 or n == nsteps:
            times[k] = t0 + n * dt
            out[k, 0] = x
            out[k, 1] = yy
            out[k, 2] = z
            out[k, 3] = vx
            out[k, 4] = vy
            out[k, 5] = vz
            k += 1
    return OK, nsteps

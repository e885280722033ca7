"""High-precision oracle for the frozen test fixtures.

Everything here is computed independently of the production kernels:
50-digit mpmath arithmetic, field derivatives by high-order numerical
differentiation of the defining closed forms (never the hand-derived
derivative formulas the kernels use), and scheme steps assembled
directly from their displayed definitions.  ``regenerate()`` returns
the complete fixture dictionary; the test suite carries these numbers
as frozen literals.
"""

from __future__ import annotations

import json

import mpmath as mp

mp.mp.dps = 50

R0 = mp.mpf(7) / 4
B0 = mp.mpf(50)
B1 = mp.mpf(10)
PSI_SCALE = mp.mpf(5)
POT_SCALE = mp.mpf(-2)

SDIRK_GAMMA = 1 - 1 / mp.sqrt(2)


def _big_r(r, theta):
    return R0 + r * mp.cos(theta)


def _screw_b(r, theta):
    b_th = B1 * r / _big_r(r, theta)
    b_ph = B0 / _big_r(r, theta)
    return mp.sqrt(b_th**2 + b_ph**2)


def _screw_omega(r, theta):
    return mp.atan2(B1 * r / _big_r(r, theta), B0 / _big_r(r, theta))


def _psi(r):
    return PSI_SCALE * (r**2 / 2 - r**3 / 3)


def _solovev_b(r, theta):
    b_th = mp.diff(_psi, r) / _big_r(r, theta)
    b_ph = B0 / _big_r(r, theta)
    return mp.sqrt(b_th**2 + b_ph**2)


def _solovev_omega(r, theta):
    return mp.atan2(mp.diff(_psi, r) / _big_r(r, theta), B0 / _big_r(r, theta))


def field_bundle(model, r, theta):
    """(b, omega, db_dr, db_dtheta, domega_dr, domega_dtheta, E_r, pot)."""
    if model == "screw":
        fb, fo = _screw_b, _screw_omega
        e_r, pot = mp.mpf(0), mp.mpf(0)
    else:
        fb, fo = _solovev_b, _solovev_omega
        pot = POT_SCALE * _psi(r)
        e_r = -POT_SCALE * mp.diff(_psi, r)
    return {
        "b": fb(r, theta),
        "omega": fo(r, theta),
        "db_dr": mp.diff(lambda s: fb(s, theta), r),
        "db_dtheta": mp.diff(lambda s: fb(r, s), theta),
        "domega_dr": mp.diff(lambda s: fo(s, theta), r),
        "domega_dtheta": mp.diff(lambda s: fo(r, s), theta),
        "E_r": e_r,
        "potential": pot,
    }


def coefficient_bundle(model, r, theta):
    f = field_bundle(model, r, theta)
    big = _big_r(r, theta)
    co, so = mp.cos(f["omega"]), mp.sin(f["omega"])
    ct, st = mp.cos(theta), mp.sin(theta)
    dot, b = f["domega_dtheta"], f["b"]
    return {
        "alpha": -dot / r * so - st / big * co,
        "beta": dot / r * co - st / big * so,
        "gamma_c": -(so**2) / r - ct / big * co**2,
        "delta": -(ct / big - 1 / r) * so * co,
        "zeta": co**2 / r + ct / big * so**2,
        "eta": -so / r * f["db_dtheta"] / b,
        "kappa": co / r * f["db_dtheta"] / b,
        "lam": -f["db_dr"] / b,
        "domega_dr": f["domega_dr"],
        "R": big,
        "b": b,
        "omega": f["omega"],
    }


def fpar(model, z, u):
    """Parallel force exactly as displayed (with mu = bmu/b)."""
    r, phi, theta, vpar, bmu = z
    ur, up = u
    c = coefficient_bundle(model, r, theta)
    b = c["b"]
    mu = bmu / b
    return b * (
        (c["gamma_c"] * ur + c["alpha"] * up) * vpar
        + b * (c["delta"] - c["domega_dr"]) * up * ur
        + c["beta"] * (mu + b * (up**2 - ur**2) / 2)
    )


def slow_rhs(model, z, u):
    r, phi, theta, vpar, bmu = z
    ur, up = u
    c = coefficient_bundle(model, r, theta)
    f = field_bundle(model, r, theta)
    b, omega = c["b"], c["omega"]
    fp = fpar(model, z, u)
    e_r, e_p, e_par = f["E_r"], mp.mpf(0), mp.mpf(0)
    return [
        b * ur,
        (mp.cos(omega) * vpar + b * mp.sin(omega) * up) / c["R"],
        (mp.sin(omega) * vpar - b * mp.cos(omega) * up) / r,
        e_par + fp,
        -vpar * fp + b * (e_r * ur + e_p * up),
    ]


def uperp_source(model, z, u):
    r, phi, theta, vpar, bmu = z
    ur, up = u
    c = coefficient_bundle(model, r, theta)
    f = field_bundle(model, r, theta)
    b = c["b"]
    mu = bmu / b
    e_r, e_p = f["E_r"], mp.mpf(0)
    u_r = (
        e_p / b
        - c["alpha"] / b * vpar**2
        + (c["domega_dr"] + c["delta"]) * vpar * ur
        + (c["eta"] - c["beta"]) * vpar * up
        + b * (c["lam"] - c["zeta"]) * ur * up
        + c["kappa"] * (mu + b * (up**2 - ur**2) / 2)
    )
    u_p = (
        -e_r / b
        + 2 * c["delta"] * vpar * up
        - c["zeta"] * b * up**2
        + c["gamma_c"] / b * vpar**2
        - c["eta"] * ur * vpar
        - c["kappa"] * ur * up
        - c["lam"] * (mu - b * (up**2 - ur**2) / 2)
    )
    return [u_r, u_p]


def limit_drift(model, z):
    r, phi, theta, vpar, bmu = z
    c = coefficient_bundle(model, r, theta)
    f = field_bundle(model, r, theta)
    return [
        -c["alpha"] * vpar**2 + c["kappa"] * bmu,
        -f["E_r"] + c["gamma_c"] * vpar**2 - c["lam"] * bmu,
    ]


def order2_rhs(model, eps, z):
    # fast-variable equilibrium: u = (eps/b) * U_perp(t, Z, 0) = eps*Ubar/b^2
    b = coefficient_bundle(model, z[0], z[2])["b"]
    ub = limit_drift(model, z)
    return slow_rhs(model, z, [eps * ub[0] / b**2, eps * ub[1] / b**2])


def _solve_resolvent(a, w):
    """(Id - a*J0)^{-1} w for J0 = [[0, 1], [-1, 0]]."""
    det = 1 + a**2
    return [(w[0] + a * w[1]) / det, (w[1] - a * w[0]) / det]


def imex1_step(model, eps, dt, z, u):
    b = coefficient_bundle(model, z[0], z[2])["b"]
    src = uperp_source(model, z, u)
    w = [u[0] - dt * src[1], u[1] + dt * src[0]]
    u1 = _solve_resolvent(b * dt / eps, w)
    f = slow_rhs(model, z, u1)
    return [z[i] + dt * f[i] for i in range(5)], u1


def imex2_step(model, eps, dt, z, u):
    g = SDIRK_GAMMA
    blend = 1 / (2 * g**2)
    b_n = coefficient_bundle(model, z[0], z[2])["b"]
    src0 = uperp_source(model, z, u)
    w = [u[0] - g * dt * src0[1], u[1] + g * dt * src0[0]]
    u1 = _solve_resolvent(g * b_n * dt / eps, w)
    f1 = slow_rhs(model, z, u1)
    z1 = [z[i] + g * dt * f1[i] for i in range(5)]
    zh = [(1 - blend) * z[i] + blend * z1[i] for i in range(5)]
    uh = [(1 - blend) * u[i] + blend * u1[i] for i in range(2)]
    b_h = coefficient_bundle(model, zh[0], zh[2])["b"]
    srch = uperp_source(model, zh, uh)
    t_r = (1 - g) * (src0[0] - b_n * u1[0] / eps) + g * srch[0]
    t_p = (1 - g) * (src0[1] - b_n * u1[1] / eps) + g * srch[1]
    w2 = [u[0] - dt * t_p, u[1] + dt * t_r]
    u2 = _solve_resolvent(g * b_h * dt / eps, w2)
    f2 = slow_rhs(model, zh, u2)
    z2 = [z[i] + dt * ((1 - g) * f1[i] + g * f2[i]) for i in range(5)]
    return z2, u2


def limit_steps(model, eps, dt, z):
    """One step of each limit scheme from z."""
    g = SDIRK_GAMMA
    out = {}
    f = slow_rhs(model, z, [mp.mpf(0), mp.mpf(0)])
    out["limit1"] = [z[i] + dt * f[i] for i in range(5)]
    zh = [z[i] + dt / (2 * g) * f[i] for i in range(5)]
    fh = slow_rhs(model, zh, [mp.mpf(0), mp.mpf(0)])
    out["limit2"] = [z[i] + dt * ((1 - g) * f[i] + g * fh[i]) for i in range(5)]
    fe = order2_rhs(model, eps, z)
    out["limit1_eff"] = [z[i] + dt * fe[i] for i in range(5)]
    yh = [z[i] + dt / (2 * g) * fe[i] for i in range(5)]
    fhe = order2_rhs(model, eps, yh)
    out["limit2_eff"] = [z[i] + dt * ((1 - g) * fe[i] + g * fhe[i]) for i in range(5)]
    return out


def initial_augmented(model, r, theta, phi, v_cartesian):
    """Section-5.1-style initial data mapped to (Z, u) in mp arithmetic."""
    ct, st = mp.cos(theta), mp.sin(theta)
    cp, sp = mp.cos(phi), mp.sin(phi)
    e_r = [ct * cp, ct * sp, st]
    e_t = [-st * cp, -st * sp, ct]
    e_p = [-sp, cp, mp.mpf(0)]
    v = [mp.mpf(c) for c in v_cartesian]
    v_r = sum(a * b for a, b in zip(v, e_r))
    v_th = sum(a * b for a, b in zip(v, e_t))
    v_ph = sum(a * b for a, b in zip(v, e_p))
    f = field_bundle(model, r, theta)
    omega, b = f["omega"], f["b"]
    vpar = mp.cos(omega) * v_ph + mp.sin(omega) * v_th
    vperp = mp.sin(omega) * v_ph - mp.cos(omega) * v_th
    bmu = (v_r**2 + vperp**2) / 2
    return [r, phi, theta, vpar, bmu], [v_r / b, vperp / b]


def torus_map(r, theta, phi):
    big = _big_r(r, theta)
    return [big * mp.cos(phi), big * mp.sin(phi), r * mp.sin(theta)]


def _floats(values):
    if isinstance(values, dict):
        return {k: _floats(v) for k, v in values.items()}
    if isinstance(values, (list, tuple)):
        return [_floats(v) for v in values]
    return float(values)


# canonical fixture inputs
SCREW_POINT = (mp.mpf(3) / 2, mp.pi / 6)
SOLOVEV_POINT = (mp.mpf(1) / 2, mp.mpf(0))
Z_SCREW = [mp.mpf(3) / 2, mp.pi / 8, mp.pi / 6, mp.mpf("7.5"), mp.mpf("3.25")]
U_SCREW = [mp.mpf("0.4"), mp.mpf("-0.3")]
Z_SOLOVEV = [mp.mpf(1) / 2, mp.pi / 8, mp.mpf(0), mp.mpf(-4), mp.mpf(2)]
U_SOLOVEV = [mp.mpf("0.2"), mp.mpf("0.1")]
INIT_RTP = (mp.mpf(3) / 2, mp.pi / 6, mp.pi / 8)
INIT_V = (10, 10, 5)


def regenerate() -> dict:
    """Recompute every derived oracle value (slow: high precision)."""
    r_s, th_s = SCREW_POINT
    r_v, th_v = SOLOVEV_POINT
    z0, u0 = initial_augmented("screw", *INIT_RTP, INIT_V)
    z0_sol, u0_sol = initial_augmented("solovev", *INIT_RTP, INIT_V)
    imex1_z, imex1_u = imex1_step("screw", mp.mpf("1e-2"), mp.mpf("1e-3"), z0, u0)
    imex2_z, imex2_u = imex2_step("screw", mp.mpf("1e-2"), mp.mpf("2e-3"), z0, u0)
    limits = limit_steps("screw", mp.mpf("1e-2"), mp.mpf("2e-2"), z0)
    return _floats({
        "torus_map": torus_map(*INIT_RTP),
        "screw_field": field_bundle("screw", r_s, th_s),
        "solovev_field": field_bundle("solovev", r_v, th_v),
        "screw_coefficients": coefficient_bundle("screw", r_s, th_s),
        "fpar_screw": fpar("screw", Z_SCREW, U_SCREW),
        "slow_rhs_screw": slow_rhs("screw", Z_SCREW, U_SCREW),
        "uperp_screw": uperp_source("screw", Z_SCREW, U_SCREW),
        "limit_drift_screw": limit_drift("screw", Z_SCREW),
        "slow_rhs_solovev": slow_rhs("solovev", Z_SOLOVEV, U_SOLOVEV),
        "uperp_solovev": uperp_source("solovev", Z_SOLOVEV, U_SOLOVEV),
        "order2_rhs_screw_eps1e-2": order2_rhs("screw", mp.mpf("1e-2"), Z_SCREW),
        "initial_augmented_screw": {"Z": z0, "u": u0},
        "initial_augmented_solovev": {"Z": z0_sol, "u": u0_sol},
        "imex1_step": {"Z": imex1_z, "u": imex1_u},
        "imex2_step": {"Z": imex2_z, "u": imex2_u},
        "limit_steps": limits,
    })


def main(out_path=None):
    data = regenerate()
    text = json.dumps(data, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text

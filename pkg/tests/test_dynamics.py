import math

import numpy as np
import pytest

import torus_pusher as tp
from torus_pusher.dynamics import ZERO_FAST
from torus_pusher.errors import DomainError

from conftest import random_slow_states
from frozen import ORACLE

TP = tp.TorusParams(1.75)
SCREW = tp.ScrewField()
SOLOVEV = tp.SolovevField()

Z_SCREW = tp.SlowState(1.5, math.pi / 8, math.pi / 6, 7.5, 3.25)
U_SCREW = tp.FastState(0.4, -0.3)
Z_SOLOVEV = tp.SlowState(0.5, math.pi / 8, 0.0, -4.0, 2.0)
U_SOLOVEV = tp.FastState(0.2, 0.1)


def test_state_validation():
    with pytest.raises(ValueError):
        tp.SlowState(1.0, 0.0, 0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        tp.Epsilon(0.0)
    with pytest.raises(ValueError):
        tp.Epsilon(1.5)
    tp.Epsilon(1.0)


class TestForceParallel:
    def test_zero_fast_zero_beta(self):
        # Solov'ev at r = 1 has beta = 0
        c = tp.coefficients(SOLOVEV, tp.ToroidalPoint(1.0, 0.7, 0.0))
        z = tp.SlowState(1.0, 0.0, 0.7, 5.0, 8.0)
        assert tp.force_parallel(z, ZERO_FAST, c) == 0.0

    def test_zero_fast_reduces_to_beta_bmu(self):
        c = tp.coefficients(SCREW, tp.ToroidalPoint(1.5, math.pi / 6, 0.0))
        assert tp.force_parallel(Z_SCREW, ZERO_FAST, c) == c.beta * Z_SCREW.bmu

    def test_generic_oracle(self):
        c = tp.coefficients(SCREW, tp.ToroidalPoint(1.5, math.pi / 6, 0.0))
        got = tp.force_parallel(Z_SCREW, U_SCREW, c)
        assert got == pytest.approx(ORACLE["fpar_screw"], rel=1e-13)


class TestSlowRhs:
    def test_zero_fast_structure(self):
        f = tp.slow_rhs(0.0, Z_SCREW, ZERO_FAST, SCREW)
        assert f[0] == 0.0
        ev = SCREW.eval(tp.ToroidalPoint(Z_SCREW.r, Z_SCREW.theta, Z_SCREW.phi))
        c = tp.coefficients(SCREW, tp.ToroidalPoint(Z_SCREW.r, Z_SCREW.theta, 0.0))
        assert f[1] == math.cos(ev.omega) * Z_SCREW.vpar / c.R
        assert f[2] == math.sin(ev.omega) * Z_SCREW.vpar / Z_SCREW.r
        # screw field has E = 0, so dvpar/dt = beta*bmu, d(bmu)/dt = -vpar*beta*bmu
        assert f[3] == c.beta * Z_SCREW.bmu
        assert f[4] == -Z_SCREW.vpar * (c.beta * Z_SCREW.bmu)

    def test_generic_oracle(self):
        got = tp.slow_rhs(0.0, Z_SCREW, U_SCREW, SCREW)
        assert np.allclose(got, ORACLE["slow_rhs_screw"], rtol=1e-13, atol=1e-13)
        got = tp.slow_rhs(0.0, Z_SOLOVEV, U_SOLOVEV, SOLOVEV)
        assert np.allclose(got, ORACLE["slow_rhs_solovev"], rtol=1e-13, atol=1e-13)

    def test_domain_error(self):
        bad = tp.SlowState(1.7495, 0.0, 0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            tp.slow_rhs(0.0, bad, ZERO_FAST, SCREW)


class TestUperpDrift:
    def test_zero_fast_is_scaled_limit_drift(self):
        rng = np.random.default_rng(11)
        for fm in (SCREW, SOLOVEV):
            for z in random_slow_states(200, rng):
                u0 = tp.uperp_drift(0.0, z, ZERO_FAST, fm)
                ub = tp.limit_drift(0.0, z, fm)
                b = float(fm.magnetic(z.r, z.theta)[0])
                for a, c in zip(u0, ub):
                    assert abs(b * a - c) <= 1e-13 * max(1.0, abs(c))

    def test_generic_oracle(self):
        got = tp.uperp_drift(0.0, Z_SCREW, U_SCREW, SCREW)
        assert np.allclose(got, ORACLE["uperp_screw"], rtol=1e-13, atol=1e-14)
        got = tp.uperp_drift(0.0, Z_SOLOVEV, U_SOLOVEV, SOLOVEV)
        assert np.allclose(got, ORACLE["uperp_solovev"], rtol=1e-13, atol=1e-14)


class TestLimitDrift:
    def test_no_field_no_parallel_velocity(self):
        # E = 0 and vpar = 0 leaves (kappa*bmu, -lam*bmu)
        z = tp.SlowState(1.5, 0.0, math.pi / 6, 0.0, 3.0)
        c = tp.coefficients(SCREW, tp.ToroidalPoint(z.r, z.theta, 0.0))
        ub = tp.limit_drift(0.0, z, SCREW)
        assert ub[0] == c.kappa * z.bmu
        assert ub[1] == -c.lam * z.bmu

    def test_generic_oracle(self):
        got = tp.limit_drift(0.0, Z_SCREW, SCREW)
        assert np.allclose(got, ORACLE["limit_drift_screw"], rtol=1e-13)


class TestOrderOneRhs:
    def test_matches_slow_rhs_exactly(self):
        rng = np.random.default_rng(12)
        for fm in (SCREW, SOLOVEV):
            for z in random_slow_states(500, rng):
                a = tp.rhs_order1(0.0, z, fm)
                b = tp.slow_rhs(0.0, z, ZERO_FAST, fm)
                assert np.array_equal(a, b)

    def test_radius_frozen(self):
        rng = np.random.default_rng(13)
        for z in random_slow_states(100, rng):
            assert tp.rhs_order1(0.0, z, SOLOVEV)[0] == 0.0

    def test_display_form(self):
        # (0; cos(w) vpar/R; sin(w) vpar/r; Epar + beta*bmu; -vpar*beta*bmu)
        rng = np.random.default_rng(14)
        for z in random_slow_states(100, rng):
            ev = SOLOVEV.eval(tp.ToroidalPoint(z.r, z.theta, z.phi))
            c = tp.coefficients(SOLOVEV, tp.ToroidalPoint(z.r, z.theta, 0.0))
            f = tp.rhs_order1(0.0, z, SOLOVEV)
            want = np.array([
                0.0,
                math.cos(ev.omega) * z.vpar / c.R,
                math.sin(ev.omega) * z.vpar / z.r,
                ev.E_par + c.beta * z.bmu,
                -z.vpar * c.beta * z.bmu,
            ])
            assert np.allclose(f, want, rtol=1e-13, atol=1e-13)

    def test_constant_force_case(self):
        # vpar = 0 and E = 0: dvpar/dt = beta*bmu, d(bmu)/dt = 0
        z = tp.SlowState(1.5, 0.0, math.pi / 6, 0.0, 3.0)
        c = tp.coefficients(SCREW, tp.ToroidalPoint(z.r, z.theta, 0.0))
        f = tp.rhs_order1(0.0, z, SCREW)
        assert f[3] == c.beta * z.bmu
        assert f[4] == 0.0


class TestOrderTwoRhs:
    def test_zero_eps_is_order_one(self):
        rng = np.random.default_rng(15)
        for z in random_slow_states(100, rng):
            a = tp.rhs_order2(0.0, z, 0.0, SCREW)
            b = tp.rhs_order1(0.0, z, SCREW)
            assert np.array_equal(a, b)

    def test_small_eps_continuity(self):
        z = Z_SCREW
        d = tp.rhs_order2(0.0, z, 1e-9, SCREW) - tp.rhs_order1(0.0, z, SCREW)
        assert np.linalg.norm(d) < 1e-7

    def test_radial_drift_component(self):
        # dr/dt = eps * (Ubar_r / b): the first line of the effective system
        rng = np.random.default_rng(16)
        for z in random_slow_states(100, rng):
            for eps in (1e-3, 1e-1):
                f = tp.rhs_order2(0.0, z, eps, SOLOVEV)
                ub = tp.limit_drift(0.0, z, SOLOVEV)
                b = float(SOLOVEV.magnetic(z.r, z.theta)[0])
                want = eps * ub[0] / b
                assert abs(f[0] - want) <= 1e-14 * max(1.0, abs(want))

    def test_dual_code_paths(self):
        # acceptance criterion: both implementations agree to 1e-12
        rng = np.random.default_rng(17)
        for fm in (SCREW, SOLOVEV):
            for z in random_slow_states(500, rng):
                for eps in (1e-4, 1e-2, 0.5):
                    a = tp.rhs_order2(0.0, z, eps, fm)
                    b = tp.rhs_order2_explicit(0.0, z, eps, fm)
                    assert np.all(
                        np.abs(a - b) <= 1e-12 * np.maximum(1.0, np.abs(a))
                    )

    def test_generic_oracle(self):
        got = tp.rhs_order2(0.0, Z_SCREW, 1e-2, SCREW)
        assert np.allclose(
            got, ORACLE["order2_rhs_screw_eps1e-2"], rtol=1e-13, atol=1e-14
        )


class TestCartesianRhs:
    def test_acceleration_orthogonal_to_velocity(self):
        # screw field has E = 0, so v . dv/dt = v . (v x B)/eps = 0
        rng = np.random.default_rng(18)
        for _ in range(100):
            p = tp.ToroidalPoint(
                rng.uniform(0.3, 1.6), rng.uniform(-3, 3), rng.uniform(-3, 3)
            )
            x = tp.toroidal_to_cartesian(p, TP)
            v = rng.uniform(-10, 10, 3)
            d = tp.rhs_cartesian(0.0, tp.PhysicalState(x, v), 1e-2, SCREW)
            assert np.array_equal(d[:3], v)
            assert abs(v @ d[3:]) <= 1e-13 * np.linalg.norm(v) * np.linalg.norm(d[3:])

    def test_rest_state_feels_electric_field(self):
        p = tp.ToroidalPoint(0.5, 0.3, 0.2)
        x = tp.toroidal_to_cartesian(p, TP)
        d = tp.rhs_cartesian(0.0, tp.PhysicalState(x, np.zeros(3)), 1.0, SOLOVEV)
        ev = SOLOVEV.eval(p)
        e_cart = tp.velocity_from_field_frame(
            ev.E_r, ev.E_perp, ev.E_par, ev.omega, p.theta, p.phi
        )
        assert np.allclose(d[3:], e_cart, rtol=1e-12, atol=1e-13)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            tp.rhs_cartesian(
                0.0,
                tp.PhysicalState(tp.CartesianPoint(4.0, 0.0, 0.0), np.zeros(3)),
                1.0, SCREW,
            )


class TestToroidalRhs:
    def test_defining_relations(self):
        rng = np.random.default_rng(19)
        for _ in range(100):
            s = np.array([
                rng.uniform(0.3, 1.6), rng.uniform(-3, 3), rng.uniform(-3, 3),
                rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10),
            ])
            d = tp.rhs_full_toroidal(0.0, s, 1e-1, SCREW)
            big_r = 1.75 + s[0] * math.cos(s[1])
            assert abs(d[1] * s[0] - s[4]) <= 1e-15 * max(1.0, abs(s[4]))
            assert abs(d[2] * big_r - s[5]) <= 1e-15 * max(1.0, abs(s[5]))

    def test_pure_radial_motion_unaccelerated_radially(self):
        # v_theta = v_phi = 0 and E = 0 kills every term of dv_r/dt
        s = np.array([1.2, 0.7, 0.3, 5.0, 0.0, 0.0])
        d = tp.rhs_full_toroidal(0.0, s, 1e-2, SCREW)
        assert d[3] == 0.0

    def test_consistency_with_cartesian(self):
        # acceptance criterion: agreement through frame maps to 1e-11
        rng = np.random.default_rng(20)
        for fm in (SCREW, SOLOVEV):
            for _ in range(100):
                r = rng.uniform(0.3, 1.6)
                th = rng.uniform(-np.pi, np.pi)
                ph = rng.uniform(-np.pi, np.pi)
                vr, vth, vph = rng.uniform(-10, 10, 3)
                eps = 10 ** rng.uniform(-2, 0)
                d6 = tp.rhs_full_toroidal(
                    0.0, [r, th, ph, vr, vth, vph], eps, fm
                )
                frame = tp.coordinate_frame(th, ph)
                x = tp.toroidal_to_cartesian(tp.ToroidalPoint(r, th, ph), TP)
                v = vr * frame.e1 + vth * frame.e2 + vph * frame.e3
                dc = tp.rhs_cartesian(0.0, tp.PhysicalState(x, v), eps, fm)
                # transport of the moving frame along the trajectory
                dth, dph = d6[1], d6[2]
                de_r = dth * frame.e2 + dph * math.cos(th) * frame.e3
                de_t = -dth * frame.e1 - dph * math.sin(th) * frame.e3
                de_p = dph * (-math.cos(th) * frame.e1 + math.sin(th) * frame.e2)
                dv = (d6[3] * frame.e1 + d6[4] * frame.e2 + d6[5] * frame.e3
                      + vr * de_r + vth * de_t + vph * de_p)
                scale = max(1.0, float(np.linalg.norm(dc[3:])))
                assert np.linalg.norm(dc[:3] - v) <= 1e-11 * scale
                assert np.linalg.norm(dc[3:] - dv) <= 1e-11 * scale


class TestAugmentedConversions:
    def test_initial_data_oracle(self):
        for fm, key in ((SCREW, "initial_augmented_screw"),
                        (SOLOVEV, "initial_augmented_solovev")):
            p = tp.ToroidalPoint(1.5, math.pi / 6, math.pi / 8)
            x = tp.toroidal_to_cartesian(p, TP)
            a = tp.augmented_from_physical(
                tp.PhysicalState(x, np.array([10.0, 10.0, 5.0])), fm
            )
            want = ORACLE[key]
            assert np.allclose(a.slow.as_array(), want["Z"], rtol=1e-12, atol=1e-12)
            assert np.allclose(a.fast.as_array(), want["u"], rtol=1e-12, atol=1e-12)
            assert a.constraint_defect(fm) <= 1e-12 * a.slow.bmu

    def test_round_trip(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            p = tp.ToroidalPoint(
                rng.uniform(0.3, 1.6), rng.uniform(-3, 3), rng.uniform(-3, 3)
            )
            x = tp.toroidal_to_cartesian(p, TP)
            v = rng.uniform(-15, 15, 3)
            s = tp.PhysicalState(x, v)
            a = tp.augmented_from_physical(s, SCREW)
            back = tp.physical_from_augmented(a, SCREW)
            assert np.allclose(back.position.as_array(), x.as_array(),
                               rtol=0, atol=1e-12)
            assert np.allclose(back.velocity, v, rtol=0, atol=1e-12 * max(
                1.0, float(np.linalg.norm(v))))

    def test_parallel_velocity_only(self):
        p = tp.ToroidalPoint(1.2, 0.5, -0.4)
        ev = SCREW.eval(p)
        v = 7.0 * tp.field_aligned_frame(ev.omega, p.theta, p.phi).e3
        x = tp.toroidal_to_cartesian(p, TP)
        a = tp.augmented_from_physical(tp.PhysicalState(x, v), SCREW)
        assert a.slow.bmu < 1e-26
        assert abs(a.fast.u_r) < 1e-15 and abs(a.fast.u_perp) < 1e-15
        assert a.slow.vpar == pytest.approx(7.0, rel=1e-14)

    def test_off_manifold_reconstruction_uses_u(self):
        # bmu never enters the rebuilt velocity: with u = 0 the speed is |vpar|
        a = tp.AugmentedState(tp.SlowState(1.2, 0.0, 0.5, 3.0, 999.0),
                              tp.FastState(0.0, 0.0))
        s = tp.physical_from_augmented(a, SCREW)
        assert np.linalg.norm(s.velocity) == pytest.approx(3.0, rel=1e-14)


class TestConservationAlongExactFlows:
    def test_order1_invariants(self, tokamak_cfg):
        from torus_pusher import runner

        fm = runner.build_field_model(tokamak_cfg)
        z0 = runner.initial_state(tokamak_cfg, fm, "slow")
        traj = tp.integrate("rk4_order1", z0, 0.0, 1.0, 1e-4, None, fm, stride=10)
        series = tp.invariant_series(traj, fm)
        assert series["energy"].max_relative_drift() < 1e-10
        assert series["mu"].max_relative_drift() < 1e-10
        assert series["r"].max_relative_drift() == 0.0

    def test_order2_energy(self, tokamak_cfg):
        from torus_pusher import runner

        fm = runner.build_field_model(tokamak_cfg)
        z0 = runner.initial_state(tokamak_cfg, fm, "slow")
        traj = tp.integrate("rk4_order2", z0, 0.0, 1.0, 1e-4, 1e-2, fm, stride=10)
        series = tp.invariant_series(traj, fm)
        assert series["energy"].max_relative_drift() < 1e-8

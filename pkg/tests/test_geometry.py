import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import torus_pusher as tp
from torus_pusher.errors import DomainError

from frozen import ORACLE

TP = tp.TorusParams(1.75)

angle = st.floats(-8 * math.pi, 8 * math.pi, allow_nan=False)
minor = st.floats(0.01, 1.74, allow_nan=False)
component = st.floats(-50.0, 50.0, allow_nan=False)


def test_torus_params_positive():
    with pytest.raises(ValueError):
        tp.TorusParams(0.0)
    with pytest.raises(ValueError):
        tp.TorusParams(-1.0)


class TestTorusMap:
    def test_angles_zero(self):
        x = tp.toroidal_to_cartesian(tp.ToroidalPoint(1.0, 0.0, 0.0), TP)
        assert (x.x, x.y, x.z) == (2.75, 0.0, 0.0)

    def test_quarter_poloidal_turn(self):
        x = tp.toroidal_to_cartesian(tp.ToroidalPoint(1.0, math.pi / 2, 0.0), TP)
        assert abs(x.x - 1.75) < 1e-15
        assert x.y == 0.0
        assert abs(x.z - 1.0) < 1e-15

    def test_generic_point_oracle(self):
        x = tp.toroidal_to_cartesian(
            tp.ToroidalPoint(1.5, math.pi / 6, math.pi / 8), TP
        )
        want = ORACLE["torus_map"]
        assert np.allclose([x.x, x.y, x.z], want, rtol=1e-15, atol=0.0)

    def test_invalid_radius(self):
        with pytest.raises(DomainError):
            tp.toroidal_to_cartesian(tp.ToroidalPoint(0.0, 0.0, 0.0), TP)
        with pytest.raises(DomainError):
            tp.toroidal_to_cartesian(tp.ToroidalPoint(1.75, 0.0, 0.0), TP)


class TestInverseMap:
    def test_trivial_inverses(self):
        p = tp.cartesian_to_toroidal(tp.CartesianPoint(2.75, 0.0, 0.0), TP)
        assert (p.r, p.theta, p.phi) == (1.0, 0.0, 0.0)
        p = tp.cartesian_to_toroidal(tp.CartesianPoint(1.75, 0.0, 1.0), TP)
        assert abs(p.r - 1.0) < 1e-15
        assert abs(p.theta - math.pi / 2) < 1e-15
        assert p.phi == 0.0

    def test_round_trip_thousand_points(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(1000):
            p = tp.ToroidalPoint(
                rng.uniform(1e-3, 1.749),
                rng.uniform(-np.pi, np.pi),
                rng.uniform(-np.pi, np.pi),
            )
            x = tp.toroidal_to_cartesian(p, TP)
            q = tp.cartesian_to_toroidal(x, TP)
            y = tp.toroidal_to_cartesian(q, TP)
            worst = max(
                worst,
                np.linalg.norm([x.x - y.x, x.y - y.y, x.z - y.z]),
                abs(p.r - q.r),
            )
            assert -math.pi < q.theta <= math.pi
            assert -math.pi < q.phi <= math.pi
        assert worst < 1e-12

    def test_axis_undefined(self):
        with pytest.raises(DomainError):
            tp.cartesian_to_toroidal(tp.CartesianPoint(0.0, 0.0, 0.3), TP)

    def test_degenerate_circle(self):
        with pytest.raises(DomainError):
            tp.cartesian_to_toroidal(tp.CartesianPoint(1.75, 0.0, 0.0), TP)

    def test_radius_too_large(self):
        with pytest.raises(DomainError):
            tp.cartesian_to_toroidal(tp.CartesianPoint(4.0, 0.0, 0.0), TP)


class TestCoordinateFrame:
    def test_angles_zero(self):
        f = tp.coordinate_frame(0.0, 0.0)
        assert np.array_equal(f.e1, [1.0, 0.0, 0.0])
        assert np.array_equal(f.e2, [0.0, 0.0, 1.0])
        assert np.array_equal(f.e3, [0.0, 1.0, 0.0])

    def test_quarter_turn(self):
        f = tp.coordinate_frame(math.pi / 2, 0.0)
        assert np.allclose(f.e1, [0.0, 0.0, 1.0], atol=1e-15)
        assert np.allclose(f.e2, [-1.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(f.e3, [0.0, 1.0, 0.0], atol=1e-15)

    @given(theta=angle, phi=angle)
    @settings(max_examples=200, deadline=None)
    def test_orthonormal(self, theta, phi):
        f = tp.coordinate_frame(theta, phi)
        assert f.max_orthonormality_defect() < 1e-14

    @given(theta=angle, phi=angle)
    @settings(max_examples=100, deadline=None)
    def test_left_handed_as_written(self, theta, phi):
        # (e_r, e_theta, e_phi) in the conventional order has det -1
        assert abs(tp.coordinate_frame(theta, phi).determinant() + 1.0) < 1e-14


class TestFieldAlignedFrame:
    def test_omega_zero(self):
        base = tp.coordinate_frame(0.7, -0.3)
        f = tp.field_aligned_frame(0.0, 0.7, -0.3)
        assert np.array_equal(f.e3, base.e3)       # e_par = e_phi
        assert np.array_equal(f.e2, -base.e2)      # e_perp = -e_theta

    def test_omega_right_angle(self):
        base = tp.coordinate_frame(0.7, -0.3)
        f = tp.field_aligned_frame(math.pi / 2, 0.7, -0.3)
        assert np.allclose(f.e3, base.e2, atol=1e-15)
        assert np.allclose(f.e2, base.e3, atol=1e-15)

    @given(omega=angle, theta=angle, phi=angle)
    @settings(max_examples=200, deadline=None)
    def test_direct_orthonormal(self, omega, theta, phi):
        f = tp.field_aligned_frame(omega, theta, phi)
        assert f.max_orthonormality_defect() < 1e-14
        assert abs(f.determinant() - 1.0) < 1e-14


class TestVelocityConversion:
    def test_frame_vectors(self):
        f = tp.field_aligned_frame(0.4, 0.7, -0.3)
        assert np.allclose(
            tp.velocity_to_field_frame(f.e3, 0.4, 0.7, -0.3), (0.0, 0.0, 1.0),
            atol=1e-15,
        )
        assert np.allclose(
            tp.velocity_from_field_frame(1.0, 0.0, 0.0, 0.4, 0.7, -0.3), f.e1,
            atol=1e-15,
        )
        assert np.allclose(
            tp.velocity_from_field_frame(0.0, 0.0, 1.0, 0.0, 0.7, -0.3),
            tp.coordinate_frame(0.7, -0.3).e3,
            atol=1e-15,
        )

    @given(
        vx=component, vy=component, vz=component,
        omega=angle, theta=angle, phi=angle,
    )
    @settings(max_examples=200, deadline=None)
    def test_norm_preserved(self, vx, vy, vz, omega, theta, phi):
        v = np.array([vx, vy, vz])
        comps = tp.velocity_to_field_frame(v, omega, theta, phi)
        assert abs(np.linalg.norm(comps) - np.linalg.norm(v)) <= 1e-13 * max(
            1.0, np.linalg.norm(v)
        )

    @given(
        vx=component, vy=component, vz=component,
        omega=angle, theta=angle, phi=angle,
    )
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, vx, vy, vz, omega, theta, phi):
        v = np.array([vx, vy, vz])
        back = tp.velocity_from_field_frame(
            *tp.velocity_to_field_frame(v, omega, theta, phi), omega, theta, phi
        )
        assert np.linalg.norm(back - v) <= 1e-13 * max(1.0, np.linalg.norm(v))

    def test_matches_angle_formulas(self):
        # v_par = cos(w) v_phi + sin(w) v_theta, v_perp = sin(w) v_phi - cos(w) v_theta
        rng = np.random.default_rng(3)
        for _ in range(50):
            omega, theta, phi = rng.uniform(-math.pi, math.pi, 3)
            v = rng.uniform(-10, 10, 3)
            base = tp.coordinate_frame(theta, phi)
            v_t, v_p = float(v @ base.e2), float(v @ base.e3)
            v_r, v_perp, v_par = tp.velocity_to_field_frame(v, omega, theta, phi)
            assert abs(v_par - (math.cos(omega) * v_p + math.sin(omega) * v_t)) < 1e-13
            assert abs(v_perp - (math.sin(omega) * v_p - math.cos(omega) * v_t)) < 1e-13
            assert abs(v_r - float(v @ base.e1)) < 1e-13

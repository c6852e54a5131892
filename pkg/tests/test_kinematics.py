import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfloat.kinematics import (
    GimbalLockError,
    coriolis_vector,
    euler_rate_matrix,
    euler_rates_from_body,
    generalized_inertia,
    rotation_matrix,
)

I_DIAG = (0.012, 0.012, 0.02)

angle = st.floats(-math.pi, math.pi, allow_nan=False)
pitch = st.floats(-1.4, 1.4, allow_nan=False)
rate = st.floats(-5.0, 5.0, allow_nan=False)


def rx(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def ry(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def rz(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def fd_coriolis(eta, eta_dot, I_diag, h=1e-6):
    """Central differences of J(eta) for both J_dot and the gradient term."""
    eta = np.asarray(eta, float)
    qd = np.asarray(eta_dot, float)
    J = lambda e: generalized_inertia(e, I_diag)
    J_dot = (J(eta + h * qd) - J(eta - h * qd)) / (2 * h)
    grad = np.zeros(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        grad[i] = (qd @ J(eta + e) @ qd - qd @ J(eta - e) @ qd) / (2 * h)
    return J_dot @ qd - 0.5 * grad


def test_rotation_identity():
    assert np.array_equal(rotation_matrix([0, 0, 0]), np.eye(3))


def test_rotation_quarter_yaw():
    R = rotation_matrix([0, 0, math.pi / 2])
    np.testing.assert_allclose(R, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-15)


def test_rotation_matches_elemental_product():
    phi, theta, psi = 0.1, 0.2, 0.3
    np.testing.assert_allclose(rotation_matrix([phi, theta, psi]),
                               rz(psi) @ ry(theta) @ rx(phi), rtol=0, atol=1e-12)


@given(angle, pitch, angle)
def test_rotation_orthonormal(phi, theta, psi):
    R = rotation_matrix([phi, theta, psi])
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_euler_rate_identity():
    np.testing.assert_array_equal(euler_rate_matrix([0, 0, 0]), np.eye(3))


def test_euler_rate_gimbal_lock():
    with pytest.raises(GimbalLockError):
        euler_rate_matrix([0, math.pi / 2, 0])
    with pytest.raises(GimbalLockError):
        euler_rates_from_body([0, -math.pi / 2, 0], [1, 0, 0])


def test_euler_rate_elements():
    expected = [
        [1, 0, -math.sin(0.2)],
        [0, math.cos(0.3), math.cos(0.2) * math.sin(0.3)],
        [0, -math.sin(0.3), math.cos(0.2) * math.cos(0.3)],
    ]
    np.testing.assert_allclose(euler_rate_matrix([0.3, 0.2, 0.0]), expected, atol=1e-15)


def test_euler_rates_trivial_cases():
    np.testing.assert_allclose(euler_rates_from_body([0, 0, 0], [1, 2, 3]), [1, 2, 3])
    np.testing.assert_array_equal(euler_rates_from_body([0.3, -0.4, 2.0], [0, 0, 0]), 0.0)


def test_euler_rates_match_explicit_inverse():
    phi, theta = 0.1, 0.2
    # closed-form inverse of W for the [z,y,x] convention
    W_inv = np.array([
        [1, math.sin(phi) * math.tan(theta), math.cos(phi) * math.tan(theta)],
        [0, math.cos(phi), -math.sin(phi)],
        [0, math.sin(phi) / math.cos(theta), math.cos(phi) / math.cos(theta)],
    ])
    np.testing.assert_allclose(euler_rates_from_body([phi, theta, 0.3], [0.5, 0, 0]),
                               W_inv @ [0.5, 0, 0], atol=1e-14)


@given(angle, pitch, angle, rate, rate, rate)
def test_euler_rate_round_trip(phi, theta, psi, a, b, c):
    eta = [phi, theta, psi]
    omega = np.array([a, b, c])
    back = euler_rate_matrix(eta) @ euler_rates_from_body(eta, omega)
    np.testing.assert_allclose(back, omega, atol=1e-10)


def test_generalized_inertia_at_zero():
    np.testing.assert_allclose(generalized_inertia([0, 0, 0], I_DIAG), np.diag(I_DIAG))


def test_generalized_inertia_matches_product():
    W = euler_rate_matrix([0.2, 0.1, 0.0])
    np.testing.assert_allclose(generalized_inertia([0.2, 0.1, 0.0], I_DIAG),
                               W.T @ np.diag(I_DIAG) @ W, atol=1e-15)


@given(angle, pitch, angle)
def test_generalized_inertia_symmetric_positive(phi, theta, psi):
    J = generalized_inertia([phi, theta, psi], I_DIAG)
    np.testing.assert_allclose(J, J.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(J) > 0)


def test_coriolis_zero_rates():
    np.testing.assert_array_equal(coriolis_vector([0.1, 0.2, 0.3], [0, 0, 0], I_DIAG), 0.0)


@given(angle, pitch, angle, rate, rate, rate)
def test_coriolis_degree_two(phi, theta, psi, a, b, c):
    eta, qd = [phi, theta, psi], np.array([a, b, c])
    np.testing.assert_allclose(coriolis_vector(eta, 2 * qd, I_DIAG),
                               4 * coriolis_vector(eta, qd, I_DIAG), rtol=1e-12, atol=1e-12)


def test_coriolis_finite_difference_example():
    eta, qd = [0.1, 0.2, 0.3], [0.4, 0.5, 0.6]
    np.testing.assert_allclose(coriolis_vector(eta, qd, I_DIAG), fd_coriolis(eta, qd, I_DIAG),
                               rtol=0, atol=1e-6)


@settings(max_examples=50)
@given(angle, pitch, angle, rate, rate, rate)
def test_coriolis_power_identity(phi, theta, psi, a, b, c):
    # qd . C = 1/2 qd . J_dot qd, which makes the rotational dynamics passive
    eta, qd = np.array([phi, theta, psi]), np.array([a, b, c])
    h = 1e-6
    J_dot = (generalized_inertia(eta + h * qd, I_DIAG)
             - generalized_inertia(eta - h * qd, I_DIAG)) / (2 * h)
    assert qd @ coriolis_vector(eta, qd, I_DIAG) == pytest.approx(
        0.5 * qd @ J_dot @ qd, abs=1e-6)

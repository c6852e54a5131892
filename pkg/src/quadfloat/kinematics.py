"""Euler-angle kinematics: rotation matrix, Euler-rate matrix, generalized
inertia and the Coriolis/centripetal vector.

Angles are ``eta = [phi, theta, psi]`` with the [z, y, x] convention. Body
rates relate to Euler rates through ``omega_b = W(eta) @ eta_dot``.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "GimbalLockError",
    "GIMBAL_EPS",
    "rotation_matrix",
    "euler_rate_matrix",
    "euler_rate_matrix_partials",
    "euler_rates_from_body",
    "generalized_inertia",
    "coriolis_vector",
]

GIMBAL_EPS = 1e-3


class GimbalLockError(ValueError):
    """Pitch too close to +/- pi/2 for the Euler-rate matrix to be invertible."""


def _angles(eta) -> tuple[float, float, float]:
    phi, theta, psi = (float(a) for a in eta)
    if not (math.isfinite(phi) and math.isfinite(theta) and math.isfinite(psi)):
        raise ValueError(f"non-finite Euler angles: {eta!r}")
    return phi, theta, psi


def _check_pitch(theta: float, eps: float) -> None:
    if abs(theta) >= math.pi / 2 - eps:
        raise GimbalLockError(f"|theta| = {abs(theta):.6g} rad is within {eps:g} of pi/2")


def rotation_matrix(eta) -> np.ndarray:
    """Body-to-inertial rotation ``Rz(psi) @ Ry(theta) @ Rx(phi)``, written out element-wise."""
    phi, theta, psi = _angles(eta)
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    return np.array([
        [cp * ct, cp * sf * st - cf * sp, sf * sp + cf * cp * st],
        [ct * sp, cf * cp + sf * sp * st, cf * sp * st - cp * sf],
        [-st, ct * sf, cf * ct],
    ])


def euler_rate_matrix(eta, eps: float = GIMBAL_EPS) -> np.ndarray:
    """Matrix ``W`` with ``omega_b = W @ eta_dot``. Independent of yaw."""
    phi, theta, _ = _angles(eta)
    _check_pitch(theta, eps)
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([
        [1.0, 0.0, -st],
        [0.0, cf, ct * sf],
        [0.0, -sf, ct * cf],
    ])


def euler_rate_matrix_partials(eta) -> tuple[np.ndarray, np.ndarray]:
    """Exact partial derivatives ``dW/dphi`` and ``dW/dtheta`` (``dW/dpsi`` is zero)."""
    phi, theta, _ = _angles(eta)
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    dW_dphi = np.array([
        [0.0, 0.0, 0.0],
        [0.0, -sf, ct * cf],
        [0.0, -cf, -ct * sf],
    ])
    dW_dtheta = np.array([
        [0.0, 0.0, -ct],
        [0.0, 0.0, -st * sf],
        [0.0, 0.0, -st * cf],
    ])
    return dW_dphi, dW_dtheta


def euler_rates_from_body(eta, omega_b, eps: float = GIMBAL_EPS) -> np.ndarray:
    """Invert ``omega_b = W eta_dot`` by a linear solve."""
    W = euler_rate_matrix(eta, eps)
    return np.linalg.solve(W, np.asarray(omega_b, dtype=float))


def generalized_inertia(eta, I_diag, eps: float = GIMBAL_EPS) -> np.ndarray:
    """Inertia in Euler-rate coordinates, ``J = W^T diag(I) W``."""
    W = euler_rate_matrix(eta, eps)
    J = W.T @ (np.asarray(I_diag, dtype=float)[:, None] * W)
    return 0.5 * (J + J.T)


def coriolis_vector(eta, eta_dot, I_diag, eps: float = GIMBAL_EPS) -> np.ndarray:
    """Coriolis/centripetal torque ``Jdot eta_dot - 1/2 d/deta (eta_dot^T J eta_dot)``.

    Uses the closed-form partials of ``W``; with ``J = W^T I W`` both terms
    reduce to products of ``W eta_dot`` and ``dW_k eta_dot``.
    """
    W = euler_rate_matrix(eta, eps)
    dW_dphi, dW_dtheta = euler_rate_matrix_partials(eta)
    I = np.asarray(I_diag, dtype=float)
    qd = np.asarray(eta_dot, dtype=float)

    omega = W @ qd
    a_phi = dW_dphi @ qd
    a_theta = dW_dtheta @ qd
    Wdot_qd = a_phi * qd[0] + a_theta * qd[1]

    # Jdot qd = Wdot^T I W qd + W^T I Wdot qd
    Wdot = dW_dphi * qd[0] + dW_dtheta * qd[1]
    jdot_qd = Wdot.T @ (I * omega) + W.T @ (I * Wdot_qd)
    # d/deta_k (qd^T J qd) = 2 (dW_k qd)^T I (W qd)
    grad = np.array([a_phi @ (I * omega), a_theta @ (I * omega), 0.0])
    return jdot_qd - grad

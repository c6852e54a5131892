"""Four-motor mixing, its inverse, and projection of thrust into the inertial frame.

Motor layout (X frame, top view, x forward, y left, z up)::

              x
              ^
        M4    |    M3
              |
      y <-----+
              |
        M2         M1

    roll  (+tau_phi, left side up):   M2, M4 push harder
    pitch (+tau_theta, nose down):    M1, M2 push harder
    yaw   (+tau_psi):                 reaction torques of M1, M4 dominate

Motors on a diagonal (M1/M4, M2/M3) spin the same way, so their reaction
torques share a sign in the yaw row. Positive pitch tilts thrust toward +x,
positive roll tilts it toward -y.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import VehicleParams, Wrench
from .kinematics import rotation_matrix

__all__ = [
    "MotorThrusts",
    "SaturationError",
    "ThrustRangeError",
    "mixing_matrix",
    "mix",
    "allocate",
    "allocate_clamped",
    "thrust_to_inertial",
]

# Tolerance on the thrust bounds, absorbs round-off from the linear solve.
_BOUND_TOL = 1e-12

YAW_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class MotorThrusts:
    T: tuple[float, float, float, float]
    tau_m: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("T", "tau_m"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) != 4:
                raise ValueError(f"{name} must have 4 entries")
            object.__setattr__(self, name, vals)

    @classmethod
    def from_thrusts(cls, T, k_ratio: float) -> "MotorThrusts":
        """Reaction torques from the proportional model ``tau_m_i = k_ratio * T_i``."""
        T = np.asarray(T, dtype=float)
        return cls(T=tuple(T), tau_m=tuple(k_ratio * T))


class ThrustRangeError(ValueError):
    """A motor thrust lies outside ``[0, T_max]``."""


class SaturationError(ValueError):
    """The requested wrench needs thrusts outside ``[0, T_max]``.

    ``clamped`` holds the solution clipped into range and ``requested`` the
    unclipped one.
    """

    def __init__(self, message: str, clamped: MotorThrusts, requested: np.ndarray):
        super().__init__(message)
        self.clamped = clamped
        self.requested = requested


def mixing_matrix(params: VehicleParams) -> np.ndarray:
    """4x4 map from ``[T1..T4]`` to ``[T_tot, tau_phi, tau_theta, tau_psi]``."""
    a = params.l_x / 2
    b = params.l_y / 2
    k = params.k_ratio
    return np.array([
        [1.0, 1.0, 1.0, 1.0],
        [-a, a, -a, a],
        [b, b, -b, -b],
        k * YAW_SIGNS,
    ])


def mix(thrusts: MotorThrusts, params: VehicleParams) -> Wrench:
    T = np.asarray(thrusts.T)
    if np.any(T < -_BOUND_TOL) or np.any(T > params.T_max + _BOUND_TOL):
        raise ThrustRangeError(f"thrusts {thrusts.T} outside [0, {params.T_max}]")
    tau_m = np.asarray(thrusts.tau_m)
    return Wrench(
        T_tot=T.sum(),
        tau=(
            (-T[0] - T[2] + T[1] + T[3]) * params.l_x / 2,
            (T[0] + T[1] - T[2] - T[3]) * params.l_y / 2,
            YAW_SIGNS @ tau_m,
        ),
    )


def _solve(wrench: Wrench, params: VehicleParams) -> np.ndarray:
    return np.linalg.solve(mixing_matrix(params), wrench.as_vector())


def allocate_clamped(wrench: Wrench, params: VehicleParams) -> tuple[MotorThrusts, bool]:
    """Solve the mixing system and clip into ``[0, T_max]``; returns ``(thrusts, saturated)``."""
    T = _solve(wrench, params)
    saturated = bool(np.any(T < -_BOUND_TOL) or np.any(T > params.T_max + _BOUND_TOL))
    T = np.clip(T, 0.0, params.T_max)
    return MotorThrusts.from_thrusts(T, params.k_ratio), saturated


def allocate(wrench: Wrench, params: VehicleParams) -> MotorThrusts:
    """Inverse of :func:`mix` under the proportional reaction-torque model.

    Raises :class:`SaturationError` (carrying the clipped thrusts) when the
    wrench is not reachable.
    """
    requested = _solve(wrench, params)
    thrusts, saturated = allocate_clamped(wrench, params)
    if saturated:
        raise SaturationError(
            f"wrench {wrench} needs thrusts {np.round(requested, 6).tolist()} "
            f"outside [0, {params.T_max}]",
            clamped=thrusts,
            requested=requested,
        )
    return thrusts


def thrust_to_inertial(wrench: Wrench, eta) -> np.ndarray:
    """Inertial force of the body-z thrust, ``R(eta) @ [0, 0, T_tot]``."""
    return rotation_matrix(eta)[:, 2] * wrench.T_tot

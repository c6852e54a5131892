"""Hydrodynamic damping and hydrostatic restoring terms for the floating mode.

Damping is lumped, diagonal and linear in velocity. Restoring acts on heave,
roll and pitch only; surge, sway and yaw have no hydrostatic stiffness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GeneralizedState, VehicleParams

__all__ = [
    "HydroWrench",
    "damping_wrench",
    "restoring_wrench_linear",
    "restoring_wrench_nonlinear",
    "restoring_wrench",
    "RESTORING_MODES",
]

RESTORING_MODES = ("linear", "nonlinear")


@dataclass(frozen=True)
class HydroWrench:
    force: tuple[float, float, float] = (0.0, 0.0, 0.0)  # X, Y, Z [N]
    moment: tuple[float, float, float] = (0.0, 0.0, 0.0)  # K, M, N [N m]

    def as_vector(self) -> np.ndarray:
        return np.array(tuple(self.force) + tuple(self.moment))


def _hw(vec) -> HydroWrench:
    vec = [float(v) for v in vec]
    return HydroWrench(force=tuple(vec[:3]), moment=tuple(vec[3:]))


def damping_wrench(v, eta_dot, params: VehicleParams) -> HydroWrench:
    force = -np.asarray(params.D_p_diag) * np.asarray(v, dtype=float)
    moment = -np.asarray(params.D_eta_diag) * np.asarray(eta_dot, dtype=float)
    return _hw(np.concatenate([force, moment]))


def restoring_wrench_nonlinear(state: GeneralizedState, params: VehicleParams) -> HydroWrench:
    """Heave stiffness plus metacentric ``sin`` moments in roll and pitch."""
    phi, theta, _ = state.eta
    return _hw([
        0.0,
        0.0,
        -params.heave_stiffness * state.p[2],
        -params.roll_stiffness * math.sin(phi),
        -params.pitch_stiffness * math.sin(theta),
        0.0,
    ])


def restoring_wrench_linear(state: GeneralizedState, params: VehicleParams) -> HydroWrench:
    """Small-angle form ``-G zeta`` with ``G = diag[0, 0, rho g A_wp, rho g nabla GM_T, rho g nabla GM_L, 0]``."""
    zeta = np.array(state.p + state.eta)
    return _hw(-params.restoring_diag * zeta)


def restoring_wrench(state: GeneralizedState, params: VehicleParams, mode: str = "linear") -> HydroWrench:
    if mode == "linear":
        return restoring_wrench_linear(state, params)
    if mode == "nonlinear":
        return restoring_wrench_nonlinear(state, params)
    raise ValueError(f"restoring mode must be one of {RESTORING_MODES}, got {mode!r}")

"""Shared domain types for the floating quadrotor model.

Coordinates follow the usual quadrotor layout: ``p = [x, y, z]`` in the
inertial frame (z up, measured from the balanced waterline) and
``eta = [phi, theta, psi]`` Euler angles in the [z, y, x] convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping

import numpy as np

__all__ = [
    "GeneralizedState",
    "VehicleParams",
    "Wrench",
    "ValidationReport",
    "InvalidParamsError",
    "validate_params",
    "equilibrium_state",
    "params_from_mapping",
]


class InvalidParamsError(ValueError):
    """Raised when an operation needs validated vehicle parameters."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(report.failures) or "invalid vehicle parameters")


def _vec3(values, name: str) -> tuple[float, float, float]:
    arr = tuple(float(v) for v in values)
    if len(arr) != 3:
        raise ValueError(f"{name} must have 3 entries, got {len(arr)}")
    return arr  # type: ignore[return-value]


@dataclass(frozen=True)
class GeneralizedState:
    """Pose and velocity of the vehicle at time ``t``.

    ``v`` is the inertial translational velocity and ``eta_dot`` the
    Euler-angle rates (not body rates).
    """

    p: tuple[float, float, float] = (0.0, 0.0, 0.0)
    eta: tuple[float, float, float] = (0.0, 0.0, 0.0)
    v: tuple[float, float, float] = (0.0, 0.0, 0.0)
    eta_dot: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t: float = 0.0

    def __post_init__(self):
        for name in ("p", "eta", "v", "eta_dot"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        object.__setattr__(self, "t", float(self.t))

    def as_vector(self) -> np.ndarray:
        """12-vector ``[p, eta, v, eta_dot]`` used by the integrator."""
        return np.array(self.p + self.eta + self.v + self.eta_dot)

    @classmethod
    def from_vector(cls, x, t: float = 0.0) -> "GeneralizedState":
        x = np.asarray(x, dtype=float)
        return cls(p=x[0:3], eta=x[3:6], v=x[6:9], eta_dot=x[9:12], t=t)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_vector()))) and math.isfinite(self.t)


@dataclass(frozen=True)
class Wrench:
    """Total body-z thrust [N] and torques ``[tau_phi, tau_theta, tau_psi]`` [N m]."""

    T_tot: float = 0.0
    tau: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "T_tot", float(self.T_tot))
        object.__setattr__(self, "tau", _vec3(self.tau, "tau"))

    def as_vector(self) -> np.ndarray:
        return np.array((self.T_tot,) + self.tau)

    @classmethod
    def from_vector(cls, w) -> "Wrench":
        return cls(T_tot=w[0], tau=(w[1], w[2], w[3]))


ZERO_WRENCH = Wrench()


@dataclass(frozen=True)
class VehicleParams:
    """Mass, inertia, hydrostatic and actuator constants of the vehicle (SI units).

    The defaults are plumbing values chosen so the package runs out of the
    box; they are not measurements of any built prototype. ``nabla`` left
    as ``None`` is derived from ``m / rho`` so weight and buoyancy balance
    by construction.
    """

    m: float = 1.2
    I_diag: tuple[float, float, float] = (0.012, 0.012, 0.02)
    D_p_diag: tuple[float, float, float] = (1.5, 1.5, 8.0)
    D_eta_diag: tuple[float, float, float] = (0.05, 0.05, 0.06)
    rho: float = 1000.0
    g: float = 9.81
    A_wp: float = 0.25
    nabla: float | None = None
    GM_T: float = 0.03
    GM_L: float = 0.03
    l_x: float = 0.2
    l_y: float = 0.2
    T_max: float = 5.0
    k_ratio: float = 0.016
    angle_limit: float = 0.3
    balance_tol: float = 1e-6

    def __post_init__(self):
        for name in ("I_diag", "D_p_diag", "D_eta_diag"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        for f in fields(self):
            if f.name in ("I_diag", "D_p_diag", "D_eta_diag", "nabla"):
                continue
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        if self.nabla is None:
            object.__setattr__(self, "nabla", self.m / self.rho)
        else:
            object.__setattr__(self, "nabla", float(self.nabla))

    @property
    def inertia(self) -> np.ndarray:
        return np.array(self.I_diag)

    @property
    def heave_stiffness(self) -> float:
        return self.rho * self.g * self.A_wp

    @property
    def roll_stiffness(self) -> float:
        return self.rho * self.g * self.nabla * self.GM_T

    @property
    def pitch_stiffness(self) -> float:
        return self.rho * self.g * self.nabla * self.GM_L

    @property
    def restoring_diag(self) -> np.ndarray:
        """Diagonal of the linear restoring matrix over ``[x, y, z, phi, theta, psi]``."""
        return np.array(
            [0.0, 0.0, self.heave_stiffness, self.roll_stiffness, self.pitch_stiffness, 0.0]
        )

    def replace(self, **changes: Any) -> "VehicleParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            out[f.name] = list(val) if isinstance(val, tuple) else val
        return out


_PARAM_FIELDS = {f.name for f in fields(VehicleParams)}


def params_from_mapping(data: Mapping[str, Any] | None) -> VehicleParams:
    """Build parameters from a ``vehicle`` config section; unknown keys are rejected."""
    data = dict(data or {})
    unknown = sorted(set(data) - _PARAM_FIELDS)
    if unknown:
        raise ValueError(f"unknown vehicle parameter(s): {', '.join(unknown)}")
    return VehicleParams(**data)


@dataclass(frozen=True)
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: tuple[str, ...] = ()
    balance_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "balance_residual": self.balance_residual,
            "checks": dict(self.checks),
            "failures": list(self.failures),
        }


def validate_params(params: VehicleParams) -> ValidationReport:
    """Check positivity, metacentric stability and weight/buoyancy balance."""
    checks: dict[str, bool] = {}
    failures: list[str] = []

    def check(name: str, ok: bool, message: str) -> None:
        checks[name] = bool(ok)
        if not ok:
            failures.append(message)

    every = [params.m, params.rho, params.g, params.A_wp, params.nabla, params.l_x,
             params.l_y, params.T_max, params.k_ratio, params.angle_limit, params.balance_tol,
             params.GM_T, params.GM_L, *params.I_diag, *params.D_p_diag, *params.D_eta_diag]
    check("finite", all(math.isfinite(v) for v in every), "all parameters must be finite")
    for name in ("m", "rho", "g", "A_wp", "nabla", "l_x", "l_y", "T_max"):
        check(f"{name}_positive", getattr(params, name) > 0, f"{name} must be positive")
    check("inertia_positive", all(i > 0 for i in params.I_diag), "principal inertias must be positive")
    check("damping_nonnegative",
          all(d >= 0 for d in params.D_p_diag + params.D_eta_diag),
          "damping coefficients must be non-negative")
    check("k_ratio_positive", params.k_ratio > 0, "k_ratio must be positive")
    check("angle_limit_positive", params.angle_limit > 0, "angle_limit must be positive")
    check("GM_T_positive", params.GM_T > 0, "metacentric height must be positive (GM_T)")
    check("GM_L_positive", params.GM_L > 0, "metacentric height must be positive (GM_L)")

    weight = params.m * params.g
    residual = abs(weight - params.rho * params.g * params.nabla) / weight if weight > 0 else math.inf
    check("buoyancy_balance", residual <= params.balance_tol,
          f"weight and buoyancy out of balance: relative residual {residual:.6g} "
          f"exceeds tolerance {params.balance_tol:g}")
    return ValidationReport(checks=checks, failures=tuple(failures), balance_residual=residual)


def require_valid(params: VehicleParams) -> None:
    report = validate_params(params)
    if not report.ok:
        raise InvalidParamsError(report)


def equilibrium_state(params: VehicleParams) -> GeneralizedState:
    """Rest state at the waterline; a fixed point of the unforced dynamics."""
    require_valid(params)
    return GeneralizedState()

"""Equations of motion of the floating vehicle and a fixed-step RK4 integrator.

Translation:  m p''   = R(eta) [0, 0, T] - D_p p' - G_p p
Rotation:     J eta'' = tau - C(eta, eta') - D_eta eta' - g_eta(eta)

Weight and buoyancy cancel by construction (validated balance), so only the
heave stiffness about the waterline remains in the translational equation.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .core import GeneralizedState, VehicleParams, Wrench, ZERO_WRENCH, require_valid
from .hydrodynamics import RESTORING_MODES
from .kinematics import GIMBAL_EPS, GimbalLockError, generalized_inertia

__all__ = [
    "CapsizeWarning",
    "SimConfig",
    "Trajectory",
    "PiecewiseWrench",
    "state_derivative",
    "integrate",
    "impulse_scenario",
    "total_energy",
    "CSV_HEADER",
]

CSV_HEADER = (
    "t", "x", "y", "z", "phi", "theta", "psi", "vx", "vy", "vz",
    "p_phi", "p_theta", "p_psi", "T_tot", "tau_phi", "tau_theta", "tau_psi", "capsize_flag",
)

_GIMBAL_BOUND = math.pi / 2 - GIMBAL_EPS

IMPULSE_DEFAULTS = {"roll": 0.1, "pitch": 0.1, "yaw": 0.005}
IMPULSE_WIDTH = 1.5
_AXIS_INDEX = {"roll": 0, "pitch": 1, "yaw": 2}


class CapsizeWarning(RuntimeWarning):
    """Roll or pitch exceeded the vehicle's capsize angle limit."""


def _derivative(x: np.ndarray, w: np.ndarray, params: VehicleParams, mode: str) -> np.ndarray:
    # Unrolled scalar form of the same equations as kinematics.coriolis_vector /
    # generalized_inertia; this runs four times per step, numpy 3x3 overhead dominates otherwise.
    px, py, pz, phi, theta, psi, vx, vy, vz, q1, q2, q3 = x.tolist()
    T, t1, t2, t3 = w.tolist()
    if abs(theta) >= _GIMBAL_BOUND:
        raise GimbalLockError(f"|theta| = {abs(theta):.6g} rad is within {GIMBAL_EPS:g} of pi/2")
    m = params.m
    Ixx, Iyy, Izz = params.I_diag
    Dx, Dy, Dz = params.D_p_diag
    Dk, Dm, Dn = params.D_eta_diag

    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)

    # translational: third column of R times thrust
    ax = (T * (sf * sp + cf * cp * st) - Dx * vx) / m
    ay = (T * (cf * sp * st - cp * sf) - Dy * vy) / m
    az = (T * cf * ct - Dz * vz - params.heave_stiffness * pz) / m

    if mode == "linear":
        gk = params.roll_stiffness * phi
        gm = params.pitch_stiffness * theta
    else:
        gk = params.roll_stiffness * sf
        gm = params.pitch_stiffness * st

    # body rates omega = W qd and y = I omega
    o1 = q1 - st * q3
    o2 = cf * q2 + ct * sf * q3
    o3 = -sf * q2 + ct * cf * q3
    y1, y2, y3 = Ixx * o1, Iyy * o2, Izz * o3
    # b = Wdot qd
    b1 = -ct * q3 * q2
    b2 = o3 * q1 - st * sf * q3 * q2
    b3 = -o2 * q1 - st * cf * q3 * q2
    z1, z2, z3 = Ixx * b1, Iyy * b2, Izz * b3
    # C = Wdot^T y + W^T z - [dW_phi qd . y, dW_theta qd . y, 0]
    c1 = z1 - (o3 * y2 - o2 * y3)
    c2 = (-sf * q1 * y2 - cf * q1 * y3) + (cf * z2 - sf * z3) \
        - (-ct * q3 * y1 - st * sf * q3 * y2 - st * cf * q3 * y3)
    c3 = (-ct * q2 * y1 + (ct * cf * q1 - st * sf * q2) * y2 + (-ct * sf * q1 - st * cf * q2) * y3) \
        + (-st * z1 + ct * sf * z2 + ct * cf * z3)

    r1 = t1 - c1 - Dk * q1 - gk
    r2 = t2 - c2 - Dm * q2 - gm
    r3 = t3 - c3 - Dn * q3

    # eta'' = W^-1 I^-1 W^-T r
    tt = st / ct
    s1 = r1 / Ixx
    s2 = (sf * tt * r1 + cf * r2 + sf / ct * r3) / Iyy
    s3 = (cf * tt * r1 - sf * r2 + cf / ct * r3) / Izz
    e1 = s1 + sf * tt * s2 + cf * tt * s3
    e2 = cf * s2 - sf * s3
    e3 = (sf * s2 + cf * s3) / ct

    return np.array([vx, vy, vz, q1, q2, q3, ax, ay, az, e1, e2, e3])


def state_derivative(state: GeneralizedState, wrench: Wrench, params: VehicleParams,
                     mode: str = "linear") -> np.ndarray:
    """Time derivative of ``[p, eta, v, eta_dot]`` as a 12-vector.

    Raises :class:`GimbalLockError` near ``|theta| = pi/2`` and ``ValueError``
    for non-finite states.
    """
    if mode not in RESTORING_MODES:
        raise ValueError(f"restoring mode must be one of {RESTORING_MODES}, got {mode!r}")
    if not state.is_finite():
        raise ValueError("non-finite state")
    return _derivative(state.as_vector(), wrench.as_vector(), params, mode)


def total_energy(state: GeneralizedState, params: VehicleParams) -> float:
    """Kinetic energy plus the quadratic potential of the linear restoring terms."""
    J = generalized_inertia(state.eta, params.I_diag)
    qd = np.asarray(state.eta_dot)
    v = np.asarray(state.v)
    zeta = np.array(state.p + state.eta)
    return float(0.5 * params.m * v @ v + 0.5 * qd @ J @ qd
                 + 0.5 * zeta @ (params.restoring_diag * zeta))


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.002
    duration: float = 10.0
    restoring_mode: str = "linear"
    record_stride: int = 1
    initial_state: GeneralizedState = field(default_factory=GeneralizedState)

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError("dt must be positive")
        if not self.duration >= self.dt:
            raise ValueError("duration must be at least dt")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be an integer >= 1")
        if self.restoring_mode not in RESTORING_MODES:
            raise ValueError(f"restoring_mode must be one of {RESTORING_MODES}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass
class Trajectory:
    """Recorded samples of a run. ``wrench[k]`` is the wrench held over the
    integration step that starts at ``t[k]``."""

    t: np.ndarray
    x: np.ndarray  # (N, 12) rows of [p, eta, v, eta_dot]
    wrench: np.ndarray  # (N, 4)
    accel: np.ndarray  # (N, 6) [p'', eta'']
    capsize: np.ndarray  # (N,) bool
    aborted: str | None = None

    @property
    def capsized(self) -> bool:
        return bool(self.capsize.any())

    def __len__(self) -> int:
        return len(self.t)

    def state(self, k: int) -> GeneralizedState:
        return GeneralizedState.from_vector(self.x[k], t=self.t[k])

    @property
    def final_state(self) -> GeneralizedState:
        return self.state(len(self) - 1)

    def channel(self, name: str) -> np.ndarray:
        idx = CSV_HEADER.index(name) - 1
        if name == "t":
            return self.t
        if idx < 12:
            return self.x[:, idx]
        if idx < 16:
            return self.wrench[:, idx - 12]
        return self.capsize.astype(float)

    def rows(self) -> Iterable[list]:
        for k in range(len(self)):
            yield [self.t[k], *self.x[k], *self.wrench[k], int(self.capsize[k])]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in self.rows():
                writer.writerow([repr(float(v)) for v in row[:-1]] + [row[-1]])


class PiecewiseWrench:
    """Sum of rectangular wrench pulses, each active on ``[start, end)``."""

    def __init__(self, segments: Iterable[tuple[float, float, Wrench]] = ()):
        self.segments = [(float(a), float(b), w) for a, b, w in segments]
        for a, b, _ in self.segments:
            if not b > a:
                raise ValueError(f"segment end {b} must be after start {a}")

    def __call__(self, t: float) -> Wrench:
        total = np.zeros(4)
        for a, b, w in self.segments:
            if a <= t < b:
                total += w.as_vector()
        return Wrench.from_vector(total)


def impulse_scenario(axis: str, amplitude: float | None = None,
                     width: float = IMPULSE_WIDTH, start: float = 0.0) -> PiecewiseWrench:
    """Rectangular torque pulse on one rotational axis, zero elsewhere.

    Default amplitudes [N m] are 0.1 (roll), 0.1 (pitch) and 0.005 (yaw),
    each held for 1.5 s.
    """
    if axis not in _AXIS_INDEX:
        raise ValueError(f"axis must be one of {sorted(_AXIS_INDEX)}, got {axis!r}")
    if amplitude is None:
        amplitude = IMPULSE_DEFAULTS[axis]
    if not math.isfinite(amplitude):
        raise ValueError("amplitude must be finite")
    if not width > 0:
        raise ValueError("width must be positive")
    tau = [0.0, 0.0, 0.0]
    tau[_AXIS_INDEX[axis]] = float(amplitude)
    return PiecewiseWrench([(start, start + width, Wrench(0.0, tau))])


WrenchInput = Callable[[float], Wrench]


def integrate(config: SimConfig, params: VehicleParams, source=None) -> Trajectory:
    """Classical RK4 with the input held constant over each step.

    ``source`` is ``None`` (no input), a callable ``t -> Wrench`` sampled at
    the step midpoint, or a controller exposing ``command(t, state, dt)``
    sampled at the start of the step. GimbalLock or non-finite states end
    the run early; the partial trajectory is returned with ``aborted`` set.
    """
    require_valid(params)
    dt = config.dt
    n = config.n_steps
    stride = int(config.record_stride)
    mode = config.restoring_mode
    controller = source if hasattr(source, "command") else None
    schedule = source if controller is None else None

    x = config.initial_state.as_vector()
    t0 = config.initial_state.t
    limit = params.angle_limit

    ts, xs, ws, accs, caps = [], [], [], [], []
    aborted = None
    warned = False
    k = 0
    while True:
        t = t0 + k * dt
        try:
            if controller is not None:
                w = controller.command(t, GeneralizedState.from_vector(x, t), dt).as_vector()
            elif schedule is not None:
                w = schedule(t + 0.5 * dt).as_vector()
            else:
                w = ZERO_WRENCH.as_vector()
            k1 = _derivative(x, w, params, mode)
        except (GimbalLockError, ValueError, np.linalg.LinAlgError) as exc:
            aborted = f"t={t:.6g}: {exc}"
            break

        capsize = abs(x[3]) > limit or abs(x[4]) > limit
        if capsize and not warned:
            warnings.warn(f"capsize angle limit {limit} rad exceeded at t={t:.4g} s",
                          CapsizeWarning, stacklevel=2)
            warned = True
        if k % stride == 0:
            ts.append(t)
            xs.append(x.copy())
            ws.append(w)
            accs.append(k1[6:12])
            caps.append(capsize)
        if k == n:
            break

        try:
            k2 = _derivative(x + 0.5 * dt * k1, w, params, mode)
            k3 = _derivative(x + 0.5 * dt * k2, w, params, mode)
            k4 = _derivative(x + dt * k3, w, params, mode)
        except (GimbalLockError, ValueError, np.linalg.LinAlgError) as exc:
            aborted = f"t={t:.6g}: {exc}"
            break
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        k += 1
        if not np.all(np.isfinite(x)):
            aborted = f"t={t0 + k * dt:.6g}: non-finite state"
            break

    return Trajectory(
        t=np.array(ts),
        x=np.array(xs).reshape(-1, 12),
        wrench=np.array(ws).reshape(-1, 4),
        accel=np.array(accs).reshape(-1, 6),
        capsize=np.array(caps, dtype=bool),
        aborted=aborted,
    )

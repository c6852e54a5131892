"""PI surface navigation: x/y through pitch/roll torque, heading through yaw torque.

The vehicle is under-actuated in the plane. Tilting redirects the total
thrust, so at psi = 0 a positive pitch pushes toward +x and a positive roll
pushes toward -y. The y loop therefore commands roll torque with a negated
sign.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace

from .actuation import allocate_clamped, mix
from .core import GeneralizedState, VehicleParams, Wrench

__all__ = [
    "PiGains",
    "PiState",
    "ControllerState",
    "ReferenceSignal",
    "SurfaceController",
    "pi_step",
    "surface_controller",
    "reference_y_step",
    "reference_psi_staircase",
    "DEFAULT_THRUST_BIAS",
]

DEFAULT_THRUST_BIAS = 0.5  # N per motor


@dataclass(frozen=True)
class PiGains:
    kp: float = 0.0
    ki: float = 0.0
    integrator_limit: float = 1.0

    def __post_init__(self):
        for name in ("kp", "ki", "integrator_limit"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.kp < 0 or self.ki < 0:
            raise ValueError("PI gains must be non-negative")
        if not self.integrator_limit > 0:
            raise ValueError("integrator_limit must be positive")

    def to_dict(self) -> dict:
        return {"kp": self.kp, "ki": self.ki, "integrator_limit": self.integrator_limit}


@dataclass(frozen=True)
class PiState:
    integral: float = 0.0


def pi_step(gains: PiGains, state: PiState, error: float, dt: float) -> tuple[float, PiState]:
    """One PI update with a clamped (anti-windup) integrator.

    The integrator accumulates ``error * dt`` and is clipped to
    ``+/- integrator_limit`` before the command is formed.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    lim = gains.integrator_limit
    integral = min(max(state.integral + error * dt, -lim), lim)
    return gains.kp * error + gains.ki * integral, PiState(integral)


@dataclass(frozen=True)
class ControllerState:
    x: PiState = field(default_factory=PiState)
    y: PiState = field(default_factory=PiState)
    psi: PiState = field(default_factory=PiState)
    t: float | None = None


@dataclass(frozen=True)
class ReferenceSignal:
    """Piecewise-constant reference: ``initial`` before the first switch,
    then ``values[i]`` from ``switch_times[i]`` on."""

    switch_times: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    initial: float = 0.0

    def __post_init__(self):
        times = tuple(float(t) for t in self.switch_times)
        vals = tuple(float(v) for v in self.values)
        if len(times) != len(vals):
            raise ValueError("switch_times and values must have equal length")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("switch times must be strictly increasing")
        object.__setattr__(self, "switch_times", times)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "initial", float(self.initial))

    def __call__(self, t: float) -> float:
        i = bisect.bisect_right(self.switch_times, t)
        return self.initial if i == 0 else self.values[i - 1]

    def steps(self) -> list[tuple[float, float, float]]:
        """``(t_switch, before, after)`` for each switch."""
        out, prev = [], self.initial
        for t, v in zip(self.switch_times, self.values):
            out.append((t, prev, v))
            prev = v
        return out

    @classmethod
    def constant(cls, value: float = 0.0) -> "ReferenceSignal":
        return cls(initial=value)


def reference_y_step(t_step: float, height: float = 0.1) -> ReferenceSignal:
    """0 before ``t_step``, ``height`` [m] after."""
    return ReferenceSignal((t_step,), (height,))


def reference_psi_staircase(step: float = 0.1745, period: float = 5.0,
                            count: int = 200) -> ReferenceSignal:
    """Heading staircase ``step * floor(t / period)`` for ``count`` steps, then held."""
    if not period > 0:
        raise ValueError("period must be positive")
    return ReferenceSignal(
        tuple(period * k for k in range(1, count + 1)),
        tuple(step * k for k in range(1, count + 1)),
    )


def _torques_from_errors(gains_x, gains_y, gains_psi, cstate, errors, dt):
    ex, ey, epsi = errors
    ux, sx = pi_step(gains_x, cstate.x, ex, dt)
    uy, sy = pi_step(gains_y, cstate.y, ey, dt)
    upsi, spsi = pi_step(gains_psi, cstate.psi, epsi, dt)
    # +tau_theta -> +theta -> +x force; +tau_phi -> +phi -> -y force
    return (-uy, ux, upsi), ControllerState(sx, sy, spsi, cstate.t)


def surface_controller(state: GeneralizedState, references, gains_x: PiGains, gains_y: PiGains,
                       gains_psi: PiGains, ctrl_state: ControllerState, dt: float,
                       params: VehicleParams, thrust_bias: float = DEFAULT_THRUST_BIAS,
                       ) -> tuple[Wrench, ControllerState, bool]:
    """Compute the allocated wrench for one control period.

    ``references`` is a triple of callables ``t -> value`` for ``x_d``,
    ``y_d`` and ``psi_d``. Total thrust is held at ``4 * thrust_bias``; the
    torque request is passed through the allocator and, if unreachable,
    clipped. Returns ``(wrench, new_state, saturated)`` where ``wrench`` is
    what the motors actually produce.
    """
    t = state.t
    ref_x, ref_y, ref_psi = references
    errors = (ref_x(t) - state.p[0], ref_y(t) - state.p[1], ref_psi(t) - state.eta[2])
    tau, new_state = _torques_from_errors(gains_x, gains_y, gains_psi, ctrl_state, errors, dt)
    requested = Wrench(4.0 * thrust_bias, tau)
    thrusts, saturated = allocate_clamped(requested, params)
    wrench = mix(thrusts, params) if saturated else requested
    return wrench, replace(new_state, t=t), saturated


class SurfaceController:
    """Stateful wrapper around :func:`surface_controller` for :func:`simulator.integrate`."""

    def __init__(self, params: VehicleParams, gains_x: PiGains, gains_y: PiGains,
                 gains_psi: PiGains, ref_x=None, ref_y=None, ref_psi=None,
                 thrust_bias: float = DEFAULT_THRUST_BIAS):
        self.params = params
        self.gains = (gains_x, gains_y, gains_psi)
        zero = ReferenceSignal.constant(0.0)
        self.references = (ref_x or zero, ref_y or zero, ref_psi or zero)
        self.thrust_bias = float(thrust_bias)
        if not 0 < 4 * self.thrust_bias <= 4 * params.T_max:
            raise ValueError("thrust_bias must lie in (0, T_max]")
        self.state = ControllerState()
        self.saturation_count = 0
        self.max_integral = 0.0

    def reset(self) -> None:
        self.state = ControllerState()
        self.saturation_count = 0
        self.max_integral = 0.0

    def command(self, t: float, state: GeneralizedState, dt: float) -> Wrench:
        wrench, self.state, saturated = surface_controller(
            state, self.references, *self.gains, self.state, dt, self.params, self.thrust_bias)
        self.saturation_count += int(saturated)
        self.max_integral = max(self.max_integral, abs(self.state.x.integral),
                                abs(self.state.y.integral), abs(self.state.psi.integral))
        return wrench


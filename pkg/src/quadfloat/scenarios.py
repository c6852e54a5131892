"""Named open- and closed-loop experiments built from a scenario mapping."""
from __future__ import annotations

import numpy as np

from .analysis import staircase_metrics, step_metrics
from .control import PiGains, SurfaceController, reference_psi_staircase, reference_y_step
from .core import VehicleParams, Wrench
from .simulator import PiecewiseWrench, SimConfig, Trajectory, impulse_scenario, integrate

__all__ = ["run_scenario"]


def _max_abs(a) -> float:
    return float(np.max(np.abs(a))) if len(a) else 0.0


def _summary(tr: Trajectory) -> dict:
    return {
        "samples": len(tr),
        "aborted": tr.aborted,
        "capsized": tr.capsized,
        "peak_abs": {name: _max_abs(tr.channel(name)) for name in ("phi", "theta", "psi", "x", "y", "z")},
        "final": {name: float(tr.channel(name)[-1]) for name in ("x", "y", "z", "phi", "theta", "psi")},
    }


def _segments(raw) -> PiecewiseWrench:
    segs = []
    for item in raw:
        segs.append((item["start"], item["end"],
                     Wrench(item.get("T_tot", 0.0), item.get("tau", (0.0, 0.0, 0.0)))))
    return PiecewiseWrench(segs)


def run_scenario(spec: dict, params: VehicleParams, sim: SimConfig,
                 gains: dict[str, PiGains], thrust_bias: float) -> tuple[Trajectory, dict]:
    """Run one scenario; returns the trajectory and a JSON-ready metrics dict."""
    kind = spec["kind"]
    out: dict = {"kind": kind}

    if kind == "impulse":
        axis = spec.get("axis", "roll")
        source = impulse_scenario(axis, spec.get("amplitude"), spec.get("width", 1.5),
                                  spec.get("start", 0.0))
        tr = integrate(sim, params, source)
        a, b, w = source.segments[0]
        out.update(axis=axis, amplitude=max(w.tau, key=abs), start=a, width=b - a)
        out.update(_summary(tr))
        return tr, out

    if kind == "custom":
        tr = integrate(sim, params, _segments(spec["segments"]))
        out.update(_summary(tr))
        return tr, out

    if kind == "y_step":
        t_step = float(spec.get("t_step", 1.0))
        height = float(spec.get("height", 0.1))
        ctrl = SurfaceController(params, gains["x"], gains["y"], gains["psi"],
                                 ref_y=reference_y_step(t_step, height), thrust_bias=thrust_bias)
        tr = integrate(sim, params, ctrl)
        out.update(t_step=t_step, height=height)
        if height != 0:
            m = step_metrics(tr.t, tr.channel("y"), height, t0=t_step)
            out["y"] = m.to_dict()
            out["status"] = "ok" if m.step_reached else "StepNotReached"
        out.update(max_abs_phi=_max_abs(tr.channel("phi")), max_abs_theta=_max_abs(tr.channel("theta")),
                   saturated_steps=ctrl.saturation_count)
        out.update(_summary(tr))
        return tr, out

    if kind == "psi_staircase":
        step = float(spec.get("step", 0.1745))
        period = float(spec.get("period", 5.0))
        ref = reference_psi_staircase(step, period)
        ctrl = SurfaceController(params, gains["x"], gains["y"], gains["psi"],
                                 ref_psi=ref, thrust_bias=thrust_bias)
        tr = integrate(sim, params, ctrl)
        steps = staircase_metrics(tr.t, tr.channel("psi"), ref) if step != 0 else []
        out.update(step=step, period=period, steps=[m.to_dict() for m in steps],
                   max_xy_drift=max(_max_abs(tr.channel("x")), _max_abs(tr.channel("y"))),
                   saturated_steps=ctrl.saturation_count)
        out.update(_summary(tr))
        return tr, out

    raise ValueError(f"unknown scenario kind {kind!r}")

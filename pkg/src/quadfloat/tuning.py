"""Constraint-driven PI gain search on the closed-loop simulator.

Each candidate gain pair is judged by simulating a step: the translational
loops must keep the tilt angle below a bound and hit a target rise time, the
heading loop must hit its own rise-time target. The search is a coarse
log-spaced grid followed by a pattern search around the best feasible point,
then a re-simulation at the fine integration step. Candidate order is fixed,
so repeated runs give identical results.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .analysis import step_metrics
from .control import DEFAULT_THRUST_BIAS, PiGains, ReferenceSignal, SurfaceController
from .core import VehicleParams
from .simulator import CapsizeWarning, SimConfig, integrate

__all__ = ["TuningConstraints", "TuningResult", "NoFeasibleGains", "tune_gains", "evaluate_candidate"]


class NoFeasibleGains(RuntimeError):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class TuningConstraints:
    step_height: float = 0.1  # m
    max_angle: float = 0.1  # rad, bound on |phi| / |theta| during the step
    rise_target: float = 5.0  # s
    rise_tolerance: float = 0.2  # relative
    psi_step: float = 0.2  # rad
    psi_rise_target: float = 1.0  # s
    psi_rise_tolerance: float = 0.2
    kp_box: tuple[float, float] = (1e-3, 1.0)
    ki_box: tuple[float, float] = (1e-4, 0.3)
    psi_kp_box: tuple[float, float] = (1e-3, 1.0)
    psi_ki_box: tuple[float, float] = (1e-4, 0.3)
    grid_points: int = 7
    max_refine_evals: int = 40
    restarts: int = 3
    search_dt: float = 0.01
    verify_dt: float = 0.002
    horizon_factor: float = 4.0
    verify_duration: float = 60.0
    integrator_limit: float = 1.0
    thrust_bias: float = DEFAULT_THRUST_BIAS
    overshoot_weight: float = 0.5
    residual_weight: float = 5.0
    restoring_mode: str = "linear"
    workers: int = 1

    def __post_init__(self):
        for name in ("kp_box", "ki_box", "psi_kp_box", "psi_ki_box"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (float(lo), float(hi)))

    @classmethod
    def from_mapping(cls, data) -> "TuningConstraints":
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown tuning option(s): {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


@dataclass
class TuningResult:
    gains_x: PiGains
    gains_y: PiGains
    gains_psi: PiGains
    report: dict = field(default_factory=dict)

    def gains_dict(self) -> dict:
        return {"x": self.gains_x.to_dict(), "y": self.gains_y.to_dict(),
                "psi": self.gains_psi.to_dict()}


def _step_source(params, axis, kp, ki, c: TuningConstraints):
    g = PiGains(kp, ki, c.integrator_limit)
    zero = PiGains(integrator_limit=c.integrator_limit)
    height = c.psi_step if axis == "psi" else c.step_height
    ref = ReferenceSignal((0.0,), (height,))
    gains = {"x": zero, "y": zero, "psi": zero}
    gains[axis] = g
    refs = {"ref_x": None, "ref_y": None, "ref_psi": None}
    refs[f"ref_{axis}"] = ref
    return SurfaceController(params, gains["x"], gains["y"], gains["psi"],
                             thrust_bias=c.thrust_bias, **refs), height


def evaluate_candidate(params: VehicleParams, axis: str, kp: float, ki: float,
                       c: TuningConstraints, dt: float, duration: float) -> dict:
    """Simulate a single-axis step and score it against the constraints."""
    controller, height = _step_source(params, axis, kp, ki, c)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CapsizeWarning)
        tr = integrate(SimConfig(dt=dt, duration=duration, restoring_mode=c.restoring_mode),
                       params, controller)
    channel = {"x": "x", "y": "y", "psi": "psi"}[axis]
    m = step_metrics(tr.t, tr.channel(channel), height)
    tilt = {"x": "theta", "y": "phi"}.get(axis)
    max_tilt = float(np.max(np.abs(tr.channel(tilt)))) if tilt else None

    if axis == "psi":
        target, tol = c.psi_rise_target, c.psi_rise_tolerance
    else:
        target, tol = c.rise_target, c.rise_tolerance
    rise = m.rise_time_s
    reasons = []
    violation = 0.0
    if tr.aborted:
        reasons.append(f"aborted: {tr.aborted}")
    if rise is None:
        reasons.append("step not reached")
    elif abs(rise - target) > tol * target:
        reasons.append(f"rise time {rise:.4g} s outside {target:g} s +/- {tol:.0%}")
        violation += abs(rise - target) / target - tol
    if max_tilt is not None and not max_tilt < c.max_angle:
        reasons.append(f"max tilt {max_tilt:.4g} rad >= {c.max_angle:g}")
        violation += max_tilt / c.max_angle - 1.0
    if rise is None or target <= 0 or tr.aborted:
        score = objective = math.inf
    else:
        residual = abs(m.final_value - height) / abs(height)
        score = (abs(rise - target) / target
                 + c.overshoot_weight * max(m.overshoot_pct, 0.0) / 100
                 + c.residual_weight * residual)
        objective = score + _PENALTY * violation
    return {
        "axis": axis,
        "kp": kp,
        "ki": ki,
        "rise_time_s": rise,
        "peak_value": m.peak_value,
        "peak_time_s": m.peak_time_s,
        "overshoot_pct": m.overshoot_pct,
        "max_tilt_rad": max_tilt,
        "saturated_steps": controller.saturation_count,
        "feasible": not reasons,
        "reasons": reasons,
        "score": score,
        "objective": objective,
        "dt": dt,
        "duration": duration,
    }


def _evaluate_many(params, axis, pairs, c, dt, duration):
    if c.workers > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=c.workers) as pool:
            futures = [pool.submit(evaluate_candidate, params, axis, kp, ki, c, dt, duration)
                       for kp, ki in pairs]
            return [f.result() for f in futures]
    return [evaluate_candidate(params, axis, kp, ki, c, dt, duration) for kp, ki in pairs]


def _log_box(box, name):
    lo, hi = box
    if not hi > 0:
        raise NoFeasibleGains(f"{name} search box {box} contains no positive values")
    lo = max(lo, hi * 1e-4)
    return math.log10(lo), math.log10(hi)


_PENALTY = 10.0

# axis and diagonal moves; rise-time level sets run diagonally in (kp, ki)
_PATTERN = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1), (1, 1), (-1, -1))


def _rank_key(r):
    return (not r["feasible"], r["score"], r["kp"], r["ki"])


def _objective_key(r):
    return (r["objective"], r["kp"], r["ki"])


def _search_axis(params, axis, c: TuningConstraints) -> tuple[PiGains, dict]:
    kp_box, ki_box = (c.psi_kp_box, c.psi_ki_box) if axis == "psi" else (c.kp_box, c.ki_box)
    target = c.psi_rise_target if axis == "psi" else c.rise_target
    if not target > 0:
        raise NoFeasibleGains(f"{axis}: rise-time target {target} s is unreachable")
    lkp = _log_box(kp_box, f"{axis} kp")
    lki = _log_box(ki_box, f"{axis} ki")
    duration = max(c.horizon_factor * target, 5.0)

    n = int(c.grid_points)
    grid_kp = np.linspace(*lkp, n)
    grid_ki = np.linspace(*lki, n)
    pairs = [(10 ** a, 10 ** b) for a in grid_kp for b in grid_ki]
    evaluated = _evaluate_many(params, axis, pairs, c, c.search_dt, duration)
    cache = {(round(math.log10(r["kp"]), 9), round(math.log10(r["ki"]), 9)): r for r in evaluated}

    def refine(start):
        # pattern search in log10 space on the penalised objective, clipped to the box
        step = [(lkp[1] - lkp[0]) / max(n - 1, 1) / 2, (lki[1] - lki[0]) / max(n - 1, 1) / 2]
        best = start
        evals = 0
        while evals < c.max_refine_evals and max(step) > 0.01:
            point = (math.log10(best["kp"]), math.log10(best["ki"]))
            moves = {}
            for d_kp, d_ki in _PATTERN:
                key = (round(min(max(point[0] + d_kp * step[0], lkp[0]), lkp[1]), 9),
                       round(min(max(point[1] + d_ki * step[1], lki[0]), lki[1]), 9))
                if key not in cache:
                    moves.setdefault(key, None)
            keys = list(moves)
            fresh = _evaluate_many(params, axis, [(10 ** a, 10 ** b) for a, b in keys],
                                   c, c.search_dt, duration)
            evals += len(fresh)
            for key, r in zip(keys, fresh):
                cache[key] = r
            evaluated.extend(fresh)
            neighbours = [cache[(round(min(max(point[0] + d_kp * step[0], lkp[0]), lkp[1]), 9),
                                 round(min(max(point[1] + d_ki * step[1], lki[0]), lki[1]), 9))]
                          for d_kp, d_ki in _PATTERN]
            cand = min(neighbours, key=_objective_key)
            if _objective_key(cand) < _objective_key(best):
                best = cand
            else:
                step = [v / 2 for v in step]

    starts = [r for r in sorted(evaluated, key=_objective_key) if math.isfinite(r["objective"])]
    for start in starts[:c.restarts]:
        refine(start)

    # re-simulate feasible candidates at the fine step, best first
    verification = None
    chosen = None
    for cand in sorted((r for r in evaluated if r["feasible"]), key=_rank_key)[:5]:
        verify_duration = max(c.verify_duration, duration) if axis != "psi" else duration
        verification = evaluate_candidate(params, axis, cand["kp"], cand["ki"], c,
                                          c.verify_dt, verify_duration)
        if verification["feasible"]:
            chosen = cand
            break

    report = {
        "axis": axis,
        "candidates": sorted(evaluated, key=lambda r: (r["kp"], r["ki"])),
        "chosen": chosen,
        "verification": verification,
    }
    if chosen is None:
        nearest = min(evaluated, key=lambda r: r["score"])
        raise NoFeasibleGains(
            f"{axis}: no gains in kp {kp_box}, ki {ki_box} meet the constraints "
            f"(closest: kp={nearest['kp']:.4g}, ki={nearest['ki']:.4g}, "
            f"{'; '.join(nearest['reasons']) or 'failed verification'})",
            report,
        )
    return PiGains(chosen["kp"], chosen["ki"], c.integrator_limit), report


def _symmetric(p: VehicleParams) -> bool:
    return (p.I_diag[0] == p.I_diag[1] and p.D_p_diag[0] == p.D_p_diag[1]
            and p.D_eta_diag[0] == p.D_eta_diag[1] and p.GM_T == p.GM_L and p.l_x == p.l_y)


def tune_gains(params: VehicleParams, constraints: TuningConstraints | None = None) -> TuningResult:
    """Search PI gains for the x, y and heading loops.

    Raises :class:`NoFeasibleGains` when any loop has no candidate meeting
    the constraints in its search box.
    """
    c = constraints or TuningConstraints()
    gains_y, rep_y = _search_axis(params, "y", c)
    if _symmetric(params):
        gains_x, rep_x = gains_y, {"axis": "x", "copied_from": "y"}
    else:
        gains_x, rep_x = _search_axis(params, "x", c)
    gains_psi, rep_psi = _search_axis(params, "psi", c)
    report = {
        "constraints": c.to_dict(),
        "gains": {"x": gains_x.to_dict(), "y": gains_y.to_dict(), "psi": gains_psi.to_dict()},
        "axes": {"x": rep_x, "y": rep_y, "psi": rep_psi},
    }
    return TuningResult(gains_x, gains_y, gains_psi, report)

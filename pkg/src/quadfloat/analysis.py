"""Step-response metrics and sim-vs-experiment comparison tables.

Conventions: rise time is the first crossing of 100 % of the step (not
10-90 %), settling uses a +/-2 % band around the final reference and counts
only if the response stays inside until the end of the record. Crossing
times are linearly interpolated between samples.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "EmptyTrajectoryError",
    "StepMetrics",
    "step_metrics",
    "staircase_metrics",
    "compare_metrics",
    "render_comparison",
    "METRIC_FIELDS",
]

METRIC_FIELDS = ("rise_time_s", "peak_time_s", "peak_value", "settling_time_s")


class EmptyTrajectoryError(ValueError):
    """No samples at or after the step onset."""


@dataclass(frozen=True)
class StepMetrics:
    rise_time_s: float | None
    peak_time_s: float | None
    peak_value: float | None
    settling_time_s: float | None
    settled: bool = True
    step_reached: bool = True
    overshoot_pct: float | None = None
    final_value: float | None = None
    reference: float | None = None
    initial: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _crossing(t0, t1, y0, y1, level):
    if y1 == y0:
        return t1
    return t0 + (level - y0) / (y1 - y0) * (t1 - t0)


def step_metrics(t, y, reference: float, t0: float = 0.0, initial: float = 0.0,
                 band: float = 0.02) -> StepMetrics:
    """Metrics of a step from ``initial`` to ``reference`` applied at ``t0``.

    Only samples with ``t >= t0`` are used. When the response never reaches
    the reference, rise time is ``None`` and ``step_reached`` is False. When
    it never stays inside the settling band, ``settled`` is False and
    ``final_value`` holds the last sample.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape:
        raise ValueError("time and response must have the same length")
    keep = t >= t0 - 1e-12
    t, y = t[keep], y[keep]
    if t.size == 0:
        raise EmptyTrajectoryError(f"no samples at or after t0={t0}")
    height = reference - initial
    if height == 0:
        raise ValueError("step height is zero")
    s = math.copysign(1.0, height)

    # rise: first sample at or beyond the reference, in the step direction
    beyond = np.nonzero(s * (y - reference) >= 0)[0]
    if beyond.size:
        i = int(beyond[0])
        t_rise = t[0] if i == 0 else _crossing(t[i - 1], t[i], y[i - 1], y[i], reference)
        rise = float(t_rise - t0)
    else:
        rise = None

    k = int(np.argmax(s * y))
    peak_time = float(t[k] - t0)
    peak_value = float(y[k])
    overshoot = float(100.0 * s * (peak_value - reference) / abs(height))

    tol = band * abs(height)
    outside = np.abs(y - reference) > tol
    if outside[-1]:
        settled, settling = False, None
    elif not outside.any():
        settled, settling = True, float(t[0] - t0)
    else:
        j = int(np.nonzero(outside)[0][-1])
        level = reference + tol if y[j] > reference else reference - tol
        settled = True
        settling = float(_crossing(t[j], t[j + 1], y[j], y[j + 1], level) - t0)

    return StepMetrics(
        rise_time_s=rise,
        peak_time_s=peak_time,
        peak_value=peak_value,
        settling_time_s=settling,
        settled=settled,
        step_reached=rise is not None,
        overshoot_pct=overshoot,
        final_value=float(y[-1]),
        reference=float(reference),
        initial=float(initial),
    )


def staircase_metrics(t, y, reference, t_end: float | None = None,
                      band: float = 0.02) -> list[StepMetrics]:
    """Per-step metrics for a piecewise-constant reference.

    Each step is analysed on the window from its switch time up to the next
    switch (or ``t_end``); steps that start after the record ends are skipped.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    t_end = t[-1] if t_end is None else t_end
    steps = [s for s in reference.steps() if s[0] < t_end]
    out = []
    for n, (ts, before, after) in enumerate(steps):
        stop = steps[n + 1][0] if n + 1 < len(steps) else t_end
        win = (t >= ts - 1e-12) & (t < stop - 1e-12)
        if n + 1 == len(steps):
            win |= np.isclose(t, stop)
        out.append(step_metrics(t[win], y[win], after, t0=ts, initial=before, band=band))
    return out


def _as_mapping(m) -> Mapping:
    return m.to_dict() if isinstance(m, StepMetrics) else m


def compare_metrics(a, b, decimals: int | None = None) -> dict[str, float | None]:
    """Percent deviation ``|a - b| / |a| * 100`` per metric field.

    ``a`` is the baseline (e.g. simulation). ``decimals`` rounds both
    operands before comparing, for tables computed from rounded readings.
    Fields that are missing or have a zero baseline map to ``None``.
    """
    a, b = _as_mapping(a), _as_mapping(b)
    out: dict[str, float | None] = {}
    for name in METRIC_FIELDS:
        va, vb = a.get(name), b.get(name)
        if va is None or vb is None:
            out[name] = None
            continue
        if decimals is not None:
            va, vb = round(va, decimals), round(vb, decimals)
        out[name] = None if va == 0 else abs(va - vb) / abs(va) * 100.0
    return out


_LABELS = {
    "rise_time_s": ("Rise-time [0-100 %]", "s"),
    "peak_time_s": ("Peak-time", "s"),
    "peak_value": ("Peak", ""),
    "settling_time_s": ("Settling-time [2 %]", "s"),
}


def _fmt(v, unit=""):
    if v is None:
        return "-"
    return f"{v:.4g} {unit}".rstrip()


def render_comparison(a, b, names: Sequence[str] = ("sim", "exp"), channel: str = "",
                      unit: str = "", decimals: int | None = None) -> str:
    """Plain-text side-by-side table with a percent-deviation column."""
    a_map, b_map = _as_mapping(a), _as_mapping(b)
    dev = compare_metrics(a_map, b_map, decimals)
    rows = [(channel, f"{channel}_{names[0]}", f"{channel}_{names[1]}", "% deviation")]
    for name in METRIC_FIELDS:
        label, u = _LABELS[name]
        u = unit if name == "peak_value" else u
        d = dev[name]
        rows.append((label, _fmt(a_map.get(name), u), _fmt(b_map.get(name), u),
                     "-" if d is None else f"{d:.2f} %"))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def metrics_json(items: Iterable[tuple[str, object]]) -> str:
    """Deterministic JSON for named metric blocks."""
    def conv(v):
        if isinstance(v, StepMetrics):
            return v.to_dict()
        if isinstance(v, list):
            return [conv(i) for i in v]
        if isinstance(v, dict):
            return {k: conv(i) for k, i in v.items()}
        return v
    return json.dumps({k: conv(v) for k, v in items}, indent=2, sort_keys=True) + "\n"

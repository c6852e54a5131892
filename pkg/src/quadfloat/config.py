"""YAML configuration: ``vehicle``, ``sim``, ``controller``, ``tuning`` and ``scenario`` sections.

Every section is optional; missing keys fall back to the package defaults.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .control import DEFAULT_THRUST_BIAS, PiGains
from .core import GeneralizedState, VehicleParams, params_from_mapping
from .simulator import SimConfig
from .tuning import TuningConstraints

__all__ = ["ConfigError", "Config", "load_config", "DEFAULT_GAINS", "SCENARIO_KINDS"]

SCENARIO_KINDS = ("impulse", "y_step", "psi_staircase", "custom")

# Output of `quadfloat tune` on the default vehicle, rounded to 4 significant digits.
DEFAULT_GAINS = {
    "x": PiGains(kp=0.1241, ki=0.0001, integrator_limit=1.0),
    "y": PiGains(kp=0.1241, ki=0.0001, integrator_limit=1.0),
    "psi": PiGains(kp=0.1334, ki=0.0001, integrator_limit=1.0),
}

DEFAULT_DURATION = {"impulse": 10.0, "y_step": 60.0, "psi_staircase": 20.0, "custom": 10.0}

_SECTIONS = ("vehicle", "sim", "controller", "tuning", "scenario")
_SIM_KEYS = {"dt", "duration", "restoring_mode", "record_stride", "initial_state"}
_STATE_KEYS = {"p", "eta", "v", "eta_dot", "t"}
_SCENARIO_KEYS = {"kind", "axis", "amplitude", "width", "start", "t_step", "height",
                  "step", "period", "segments"}


class ConfigError(ValueError):
    """Missing, unparsable or inconsistent configuration."""


@dataclass
class Config:
    vehicle: dict = field(default_factory=dict)
    sim: dict = field(default_factory=dict)
    controller: dict = field(default_factory=dict)
    tuning: dict = field(default_factory=dict)
    scenario: dict = field(default_factory=dict)
    source: str | None = None

    def params(self) -> VehicleParams:
        try:
            return params_from_mapping(self.vehicle)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"vehicle: {exc}") from exc

    def sim_config(self, kind: str | None = None, **overrides: Any) -> SimConfig:
        data = dict(self.sim)
        unknown = sorted(set(data) - _SIM_KEYS)
        if unknown:
            raise ConfigError(f"sim: unknown key(s) {', '.join(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "duration" not in data and kind in DEFAULT_DURATION:
            data["duration"] = DEFAULT_DURATION[kind]
        init = data.pop("initial_state", None) or {}
        bad = sorted(set(init) - _STATE_KEYS)
        if bad:
            raise ConfigError(f"sim.initial_state: unknown key(s) {', '.join(bad)}")
        try:
            return SimConfig(initial_state=GeneralizedState(**init), **data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sim: {exc}") from exc

    def gains(self) -> dict[str, PiGains]:
        out = dict(DEFAULT_GAINS)
        for axis in ("x", "y", "psi"):
            if axis in self.controller:
                try:
                    out[axis] = PiGains(**self.controller[axis])
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"controller.{axis}: {exc}") from exc
        return out

    @property
    def thrust_bias(self) -> float:
        return float(self.controller.get("thrust_bias", DEFAULT_THRUST_BIAS))

    def constraints(self) -> TuningConstraints:
        try:
            return TuningConstraints.from_mapping(self.tuning)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"tuning: {exc}") from exc

    def scenario_spec(self, kind: str | None = None) -> dict:
        spec = dict(self.scenario)
        unknown = sorted(set(spec) - _SCENARIO_KEYS)
        if unknown:
            raise ConfigError(f"scenario: unknown key(s) {', '.join(unknown)}")
        if kind is not None:
            spec["kind"] = kind
        spec.setdefault("kind", "impulse")
        if spec["kind"] not in SCENARIO_KINDS:
            raise ConfigError(f"scenario.kind must be one of {SCENARIO_KINDS}, got {spec['kind']!r}")
        if spec["kind"] == "custom" and not spec.get("segments"):
            raise ConfigError("scenario kind 'custom' needs a 'segments' list")
        return spec


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping of sections")
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")
    for name in _SECTIONS:
        if data.get(name) is not None and not isinstance(data[name], dict):
            raise ConfigError(f"section '{name}' must be a mapping")
    return Config(**{name: dict(data.get(name) or {}) for name in _SECTIONS}, source=str(path))

"""Command-line front end: ``quadfloat {validate,simulate,tune,metrics}``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .analysis import EmptyTrajectoryError, metrics_json, step_metrics
from .config import SCENARIO_KINDS, ConfigError, load_config
from .control import PiGains
from .core import validate_params
from .simulator import CSV_HEADER, CapsizeWarning
from .scenarios import run_scenario
from .tuning import NoFeasibleGains, tune_gains

EXIT_OK = 0
EXIT_INVALID_PARAMS = 1
EXIT_CONFIG = 2
EXIT_SIM_ABORTED = 3
EXIT_NO_FEASIBLE_GAINS = 4
EXIT_BAD_DATA = 5

EXIT_CODES_HELP = """exit codes:
  0  success
  1  vehicle parameters failed validation
  2  usage error, or missing/unparsable config or gains file
  3  simulation aborted (gimbal lock or non-finite state); partial output written
  4  tuning found no feasible gains
  5  metrics input unusable (missing column, empty or degenerate step)
"""


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_gains(path: str) -> dict[str, PiGains]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read gains file {path}: {exc}", EXIT_CONFIG) from exc
    data = data.get("gains", data)
    try:
        return {axis: PiGains(**data[axis]) for axis in ("x", "y", "psi")}
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"gains file {path} lacks valid x/y/psi gains: {exc}", EXIT_CONFIG) from exc


def _valid_params(cfg):
    params = cfg.params()
    report = validate_params(params)
    if not report.ok:
        raise CliError("invalid vehicle parameters: " + "; ".join(report.failures),
                       EXIT_INVALID_PARAMS)
    return params


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    report = validate_params(cfg.params())
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    print("PASS" if report.ok else "FAIL", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_INVALID_PARAMS


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    params = _valid_params(cfg)
    if args.restoring:
        cfg.sim["restoring_mode"] = args.restoring
    spec = cfg.scenario_spec(args.scenario)
    sim = cfg.sim_config(spec["kind"], dt=args.dt, duration=args.duration)
    gains = _load_gains(args.gains) if args.gains else cfg.gains()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CapsizeWarning)
        traj, metrics = run_scenario(spec, params, sim, gains, cfg.thrust_bias)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    metrics["sim"] = {"dt": sim.dt, "duration": sim.duration, "restoring_mode": sim.restoring_mode,
                      "record_stride": sim.record_stride}
    metrics["gains"] = {k: g.to_dict() for k, g in gains.items()}
    metrics["vehicle"] = params.to_dict()
    traj.to_csv(out / "trajectory.csv")
    (out / "metrics.json").write_text(metrics_json(sorted(metrics.items())))
    print(f"wrote {out / 'trajectory.csv'} ({len(traj)} samples) and {out / 'metrics.json'}")
    if traj.aborted:
        print(f"simulation aborted: {traj.aborted}", file=sys.stderr)
        return EXIT_SIM_ABORTED
    return EXIT_OK


def cmd_tune(args) -> int:
    cfg = load_config(args.config)
    params = _valid_params(cfg)
    constraints = cfg.constraints()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        result = tune_gains(params, constraints)
    except NoFeasibleGains as exc:
        _dump(out / "tuning.json", {"feasible": False, "error": str(exc), "report": exc.report})
        print(f"no feasible gains: {exc}", file=sys.stderr)
        return EXIT_NO_FEASIBLE_GAINS
    _dump(out / "tuning.json", {"feasible": True, "gains": result.gains_dict(), "report": result.report})
    print(json.dumps(result.gains_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_metrics(args) -> int:
    try:
        with open(args.csv, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise CliError(f"cannot read {args.csv}: {exc}", EXIT_CONFIG) from exc
    if not rows or args.channel not in rows[0]:
        raise CliError(f"{args.csv}: no '{args.channel}' column or no rows", EXIT_BAD_DATA)
    t = np.array([float(r["t"]) for r in rows])
    y = np.array([float(r[args.channel]) for r in rows])
    try:
        m = step_metrics(t, y, args.reference, t0=args.t0, initial=args.initial)
    except (EmptyTrajectoryError, ValueError) as exc:
        raise CliError(str(exc), EXIT_BAD_DATA) from exc
    text = metrics_json([("channel", args.channel), (args.channel, m)])
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadfloat",
        description="Floating quadrotor simulator: validation, scenarios, PI tuning, step metrics.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML config with vehicle/sim/controller/tuning/scenario sections")

    p = sub.add_parser("validate", help="check vehicle parameters", epilog=EXIT_CODES_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="run a scenario, write trajectory.csv and metrics.json",
                       epilog=EXIT_CODES_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--scenario", choices=SCENARIO_KINDS, help="scenario kind (overrides config)")
    p.add_argument("--dt", type=float, help="integration step [s]")
    p.add_argument("--duration", type=float, help="simulated time [s]")
    p.add_argument("--restoring", choices=("linear", "nonlinear"), help="restoring-force model")
    p.add_argument("--gains", help="tuning.json (or gains JSON) to use for closed-loop scenarios")
    p.add_argument("--seed", type=int, help="reserved; the dynamics are deterministic")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tune", help="search PI gains meeting the tuning constraints",
                       epilog=EXIT_CODES_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    common(p)
    p.add_argument("--out", default="out", help="output directory for tuning.json")
    p.add_argument("--seed", type=int, help="reserved; the search is deterministic")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("metrics", help="step metrics for one column of an existing trajectory.csv",
                       epilog=EXIT_CODES_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("csv", help="trajectory CSV")
    p.add_argument("--channel", default="y", choices=CSV_HEADER[1:-1])
    p.add_argument("--reference", type=float, required=True, help="final reference value")
    p.add_argument("--t0", type=float, default=0.0, help="step onset [s]")
    p.add_argument("--initial", type=float, default=0.0, help="value before the step")
    p.add_argument("--out", help="write metrics JSON here as well")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

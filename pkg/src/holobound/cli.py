"""Command-line front end.

    holobound simulate --config run.cfg [--out rows.csv] [--format csv|json]
    holobound bounds   --config run.cfg [--steps 4000] [--seed 0]
    holobound verify   qubit-tightness

Config files hold one ``key = value`` per line; ``#`` starts a comment. The
``scenario`` key selects qubit, qutrit, counterexample, random or stationary.
Numeric parameters accept a comma-separated list or an inclusive range
``start:stop:step``; lists are swept as a Cartesian product.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 physics error (open curve or stationary state).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import verify
from .bounds import full_report
from .core import StateVector, qubit_hamiltonian, qubit_state
from .errors import GridError, PhysicsError, StationaryStateError
from .evolution import Constant, evolve_schedule, resolved_steps, uniform_grid
from .geometry import aa_phase, fs_length
from .scenarios import (
    CounterexampleScenario,
    QubitScenario,
    QutritScenario,
    build_counterexample,
    build_qubit,
    build_qutrit,
    random_periodic,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PHYSICS = 0, 1, 2, 3

SIMULATE_COLUMNS = ["scenario", "param1", "param2", "tau", "theta", "fs_length", "closure_defect"]
BOUNDS_COLUMNS = [
    "scenario", "param1", "param2", "tau", "theta", "fs_length", "avg_dH",
    "ml_bound", "mt_bound", "bd_bound", "ml_ratio", "mt_ratio", "bd_ratio", "closure_defect",
]
# appended after the fixed schema
BOUNDS_EXTRA_COLUMNS = ["ml_time_averaged", "ml_flag"]

SCENARIO_PARAMS = {
    "qubit": ("phi", "omega"),
    "counterexample": ("E", "chi"),
    "qutrit": ("omega",),
    "random": ("dim", "seed"),
    "stationary": ("omega",),
}
DEFAULTS = {"omega": "1", "E": "1", "chi": repr(math.pi / 3), "trace_h": "0", "dim": "2", "levels": "0 1 2",
            "occupations": "1 1 1", "phases": "0 0"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str
    params: dict[str, str]
    steps: int = 4000
    tol_closure: Optional[float] = None
    fmt: str = "csv"
    out: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIO_PARAMS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.steps < 100:
            raise ConfigError(f"steps per period must be >= 100, got {self.steps}")
        if self.tol_closure is not None and not self.tol_closure > 0:
            raise ConfigError("tolerances must be positive")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")


def parse_config_text(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value
    return out


def parse_values(text: str) -> list[float]:
    """``"0.1, 0.2"`` or ``"0.1:3.0:0.1"`` (inclusive) to a list of floats."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(s) for s in text.split(":"))
            if step <= 0:
                raise ConfigError(f"range step must be positive in {text!r}")
            n = int(math.floor((stop - start) / step + 1e-9))
            return [round(start + k * step, 12) for k in range(n + 1)]
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse numbers from {text!r}") from None


def load_config(path: str, args: argparse.Namespace) -> RunConfig:
    try:
        with open(path) as fh:
            raw = parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if "scenario" not in raw:
        raise ConfigError("config needs a 'scenario' key")
    scenario = raw.pop("scenario")

    def pick(key, cli_value, cast):
        value = cli_value if cli_value is not None else raw.pop(key, None)
        raw.pop(key, None)
        try:
            return None if value is None else cast(value)
        except (TypeError, ValueError):
            raise ConfigError(f"bad value for {key}: {value!r}") from None

    env_tol = os.environ.get("HB_TOL_CLOSURE")
    steps = pick("steps", args.steps, int)
    seed = pick("seed", args.seed, int)
    tol = pick("tol_closure", env_tol, float)
    fmt = pick("format", args.format, str)
    out = pick("out", args.out, str)
    return RunConfig(
        scenario=scenario,
        params=raw,
        steps=4000 if steps is None else steps,
        tol_closure=tol,
        fmt=fmt or "csv",
        out=out,
        seed=0 if seed is None else seed,
    )


@dataclass(frozen=True)
class Run:
    scenario: str
    param1: float
    param2: float
    schedule: object
    psi: object
    tau: float
    stationary: bool = False


def _floats(cfg: RunConfig, key: str) -> list[float]:
    return parse_values(cfg.params.get(key, DEFAULTS.get(key, "")))


def _vector(cfg: RunConfig, key: str) -> tuple[float, ...]:
    text = cfg.params.get(key, DEFAULTS[key])
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"bad vector for {key}: {text!r}") from None


def expand_runs(cfg: RunConfig) -> list[Run]:
    """Every parameter combination of the sweep, in deterministic order."""
    kind = cfg.scenario
    runs = []
    try:
        if kind == "qubit":
            trace = float(cfg.params.get("trace_h", "0"))
            for phi, omega in itertools.product(_floats(cfg, "phi"), _floats(cfg, "omega")):
                try:
                    sched, psi, tau, _ = build_qubit(QubitScenario(phi, omega, trace))
                    runs.append(Run(kind, phi, omega, sched, psi, tau))
                except StationaryStateError:
                    if not omega > 0:
                        raise
                    sched = Constant(qubit_hamiltonian((0.0, 0.0, omega), trace))
                    runs.append(Run(kind, phi, omega, sched, qubit_state(phi), 2 * math.pi / omega, True))
        elif kind == "counterexample":
            for e, chi in itertools.product(_floats(cfg, "E"), _floats(cfg, "chi")):
                sched, psi, tau = build_counterexample(CounterexampleScenario(e, chi))
                runs.append(Run(kind, e, chi, sched, psi, tau))
        elif kind == "qutrit":
            levels = _vector(cfg, "levels")
            occ = _vector(cfg, "occupations")
            phases = _vector(cfg, "phases")
            for omega in _floats(cfg, "omega"):
                s = QutritScenario(tuple(levels), tuple(occ), tuple(phases), omega)
                sched, psi, tau = build_qutrit(s)
                mean = float(np.dot(np.asarray(occ) / sum(occ), levels))
                runs.append(Run(kind, omega, mean, sched, psi, tau))
        elif kind == "random":
            count = int(cfg.params.get("count", "1"))
            seeds = cfg.params.get("seeds")
            seed_list = [int(s) for s in parse_values(seeds)] if seeds else [cfg.seed + k for k in range(count)]
            for dim, seed in itertools.product(_floats(cfg, "dim"), seed_list):
                sched, psi, tau = random_periodic(int(dim), int(seed))
                runs.append(Run(kind, int(dim), int(seed), sched, psi, tau))
        elif kind == "stationary":
            for omega in _floats(cfg, "omega"):
                sched = Constant(qubit_hamiltonian((0.0, 0.0, omega)))
                runs.append(Run(kind, omega, 0.0, sched, StateVector([1, 0]), 2 * math.pi / omega, True))
    except PhysicsError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    if not runs:
        raise ConfigError(f"no parameter values given for scenario {kind!r}")
    return runs


def _trajectory(run: Run, cfg: RunConfig):
    steps = resolved_steps(run.schedule, run.tau, cfg.steps)
    return evolve_schedule(run.schedule, run.psi, uniform_grid(run.tau, steps))


def simulate_record(run: Run, cfg: RunConfig) -> dict:
    if run.stationary:
        raise StationaryStateError(f"{run.scenario} run ({run.param1:g}, {run.param2:g}) is an eigenstate")
    traj = _trajectory(run, cfg)
    phase = aa_phase(traj, cfg.tol_closure, extrapolate=True)
    return {
        "scenario": run.scenario,
        "param1": run.param1,
        "param2": run.param2,
        "tau": run.tau,
        "theta": phase.theta,
        "fs_length": fs_length(traj),
        "closure_defect": phase.closure_defect,
    }


def _stationary_bounds(run: Run) -> dict:
    # theta = 0 and a curve of zero length: every bound is zero
    zero = dict.fromkeys(BOUNDS_COLUMNS[3:] + ["ml_time_averaged"], 0.0)
    zero["tau"] = run.tau
    return {"scenario": run.scenario, "param1": run.param1, "param2": run.param2, **zero,
            "ml_flag": "bound", "ml_quotients": [0.0, 0.0]}


def bounds_record(run: Run, cfg: RunConfig) -> dict:
    if run.stationary:
        return _stationary_bounds(run)
    traj = _trajectory(run, cfg)
    rep = full_report(traj, cfg.tol_closure)
    ratios = rep.saturation_ratios
    return {
        "scenario": run.scenario,
        "param1": run.param1,
        "param2": run.param2,
        "tau": rep.tau,
        "theta": rep.theta,
        "fs_length": rep.fs_length,
        "avg_dH": rep.avg_uncertainty,
        "ml_bound": rep.ml_bound,
        "mt_bound": rep.mt_bound,
        "bd_bound": rep.bd_bound,
        "ml_ratio": ratios["ml"],
        "mt_ratio": ratios["mt"],
        "bd_ratio": ratios["bd"],
        "closure_defect": rep.closure_defect,
        "ml_time_averaged": rep.ml_time_averaged,
        "ml_flag": "bound" if rep.ml_is_bound else "not_a_bound",
        "ml_quotients": list(rep.ml_quotients),
    }


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".12g")


def _json_value(x):
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    return float(format(x, ".12g")) if math.isfinite(x) else None


def serialize(records: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        rows = [{k: _json_value(r[k]) for k in r} for r in records]
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from None


def _map_rows(fn, runs, cfg):
    # rows are evaluated concurrently but collected in input order
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda r: fn(r, cfg), runs))


def cmd_simulate(cfg: RunConfig) -> int:
    records = _map_rows(simulate_record, expand_runs(cfg), cfg)
    _emit(serialize(records, SIMULATE_COLUMNS, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_bounds(cfg: RunConfig) -> int:
    records = _map_rows(bounds_record, expand_runs(cfg), cfg)
    _emit(serialize(records, BOUNDS_COLUMNS + BOUNDS_EXTRA_COLUMNS, cfg.fmt), cfg.out)
    return EXIT_OK


def cmd_verify(suite: str, steps: int = 4000, seed: int = 0, out=None) -> int:
    if suite not in verify.SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(verify.SUITES)}")
    checks = verify.run_suite(suite, steps=steps, seed=seed)
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  status  {'residual':>12}  tolerance"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  {c.residual:12.3e}  {c.tol:.1e}")
    ok = all(c.passed for c in checks)
    worst = max((c.residual for c in checks), default=0.0)
    lines.append(f"{suite}: {'PASS' if ok else 'FAIL'} (worst residual {worst:.3e})")
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holobound", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "bounds"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--steps", type=int)
        p.add_argument("--seed", type=int)
    p = sub.add_parser("verify")
    p.add_argument("suite")
    p.add_argument("--config", help="accepted for symmetry; unused")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            if args.steps < 2:
                raise ConfigError("steps must be >= 2")
            return cmd_verify(args.suite, args.steps, args.seed, args.out)
        cfg = load_config(args.config, args)
        return cmd_simulate(cfg) if args.command == "simulate" else cmd_bounds(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StationaryStateError as exc:
        print(f"stationary: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (PhysicsError, GridError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())

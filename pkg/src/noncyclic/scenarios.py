"""Named, JSON-configured runs of every model in the package.

A scenario document looks like::

    {"name": "ab-sweep", "config": {"eta": 0.3},
     "output": {"path": "ab.csv", "format": "csv"},
     "sweep": {"axis": "eta", "values": [0, 0.3, 0.5]}}

Every runner takes a validated config dict and returns a :class:`Table`.
Unknown config keys are schema errors, so typos fail loudly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .abbox import ABConfig, ab_sweep, regime
from .errors import SchemaError
from .experiment import polarization_z, spin_geometric_phase
from .geodesic import SpherePath, closure_phase, octant_path, octant_waypoints
from .models import SpinConfig, conical_model, spin_model, spin_vector_model, tabulated_model
from .oracle import dress, oracle_geometric_phase, pancharatnam_phase, propagate, trajectory_rows
from .paths import ParameterPath, leg_schedule, load_path
from .phase import adiabaticity_metric, geometric_phase, phase_track

SIG_DIGITS = 12


@dataclass
class Table:
    rows: list
    summary: Optional[dict] = None

    def columns(self):
        cols = []
        for row in self.rows:
            cols.extend(k for k in row if k not in cols)
        return cols

    def summary_row(self) -> dict:
        if self.summary is not None:
            return self.summary
        if not self.rows:
            return {}
        return self.rows[-1]


@dataclass
class Scenario:
    name: str
    config: dict = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "csv"
    seed: Optional[int] = None
    sweep: Optional[dict] = None

    @classmethod
    def from_json(cls, doc) -> "Scenario":
        if not isinstance(doc, dict) or "name" not in doc:
            raise SchemaError("scenario must be a JSON object with a 'name'")
        unknown = set(doc) - {"name", "config", "output", "seed", "sweep"}
        if unknown:
            raise SchemaError(f"unknown scenario keys: {sorted(unknown)}")
        out = doc.get("output") or {}
        if isinstance(out, str):
            out = {"path": out}
        fmt = out.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise SchemaError(f"unknown output format {fmt!r}")
        config = doc.get("config") or {}
        if not isinstance(config, dict):
            raise SchemaError("scenario config must be an object")
        sweep = doc.get("sweep")
        if sweep is not None and (not isinstance(sweep, dict) or set(sweep) != {"axis", "values"}):
            raise SchemaError("sweep must be {'axis': name, 'values': [...]}")
        return cls(doc["name"], dict(config), out.get("path"), fmt, doc.get("seed"), sweep)


def load_scenario(filename) -> Scenario:
    try:
        with open(filename) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{filename}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise SchemaError(f"cannot read scenario {filename}: {exc}") from None
    return Scenario.from_json(doc)


# ----------------------------------------------------------------- helpers

def _validated(config: dict, defaults: dict) -> dict:
    unknown = set(config) - set(defaults)
    if unknown:
        raise SchemaError(f"unknown config keys: {sorted(unknown)}")
    out = dict(defaults)
    out.update(config)
    return out


def _number(cfg, key, positive=False, integer=False):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise SchemaError(f"{key} must be a finite number, got {val!r}")
    if integer and int(val) != val:
        raise SchemaError(f"{key} must be an integer, got {val!r}")
    if positive and val <= 0:
        raise SchemaError(f"{key} must be positive, got {val!r}")
    return int(val) if integer else float(val)


def _load_parameter_path(source) -> ParameterPath:
    if isinstance(source, dict):
        return ParameterPath.from_json(source)
    if isinstance(source, str):
        return load_path(source)
    raise SchemaError("path must be a file name or an inline {'closed', 'samples'} object")


def _sphere_path(source, theta0=None) -> SpherePath:
    """Named sphere path, inline ParameterPath JSON or a path file with R = (Theta, Phi)."""
    if source == "octant":
        return octant_path()
    if source == "equator-quarter":
        th = np.pi / 2 if theta0 is None else theta0
        return SpherePath(np.full(400, th), np.linspace(0.0, np.pi / 2, 400))
    return SpherePath.from_parameter_path(_load_parameter_path(source))


def _model(name, model_config, table=None):
    model_config = model_config or {}
    if name == "conical":
        return conical_model(float(model_config.get("R", 1.0)))
    if name == "spin":
        return spin_model(SpinConfig(float(model_config.get("omega_B", 1.0))))
    if name == "spin-vector":
        return spin_vector_model()
    if name == "custom":
        if table is None:
            raise SchemaError("custom model needs a 'table'")
        if isinstance(table, str):
            try:
                table = json.loads(Path(table).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise SchemaError(f"cannot read model table: {exc}") from None
        return tabulated_model(table)
    raise SchemaError(f"unknown model {name!r}")


def octant_schedule(duration, samples_per_leg=400) -> ParameterPath:
    return leg_schedule(octant_waypoints(), duration, samples_per_leg)


def duration_for_metric(model, build, level, target) -> float:
    """Duration at which ``build(duration)`` has adiabaticity metric ``target``.

    The metric scales as 1/duration for a fixed path shape.
    """
    m1 = adiabaticity_metric(model, build(1.0), level).metric
    return m1 / target


# ----------------------------------------------------------------- runners

CONICAL_DEFAULTS = {"R": 1.0, "n_points": 200, "phi_values": None, "samples": 101,
                    "level": "+", "method": "analytic"}


def run_conical_sign_change(config, seed=None) -> Table:
    """Geometric phase of the conical model for open arcs Phi: 0 -> Phi_f."""
    cfg = _validated(config, CONICAL_DEFAULTS)
    model = conical_model(_number(cfg, "R", positive=True))
    if cfg["phi_values"] is None:
        n = _number(cfg, "n_points", positive=True, integer=True)
        phis = np.linspace(0.0, 2 * np.pi, n + 2)[1:-1]
    else:
        phis = np.asarray(cfg["phi_values"], dtype=float).ravel()
    samples = _number(cfg, "samples", integer=True)
    if samples < 2:
        raise SchemaError("samples must be at least 2")
    method = {"analytic": "auto", "numeric": "overlap"}.get(cfg["method"])
    if method is None:
        raise SchemaError("method must be 'analytic' or 'numeric'")
    rows = []
    for phi_f in phis:
        path = ParameterPath.from_points(np.linspace(0.0, phi_f, samples), duration=1.0)
        if method == "overlap":
            frames = [model.frame(p, cfg["level"], analytic=False) for p in path.points]
            d = geometric_phase(model, path, cfg["level"], frames=frames, method="overlap")
        else:
            d = geometric_phase(model, path, cfg["level"])
        rows.append({"phi_f": float(phi_f), "gamma_wrapped": d.geometric_phase,
                     "gamma_unwrapped": d.geometric_unwrapped, "energy_phase": d.energy_phase})
    below = [r["gamma_wrapped"] for r in rows if r["phi_f"] < np.pi]
    above = [r["gamma_wrapped"] for r in rows if r["phi_f"] > np.pi]
    summary = {"R": cfg["R"], "n_rows": len(rows),
               "max_abs_gamma_below_pi": max(map(abs, below), default=0.0),
               "min_abs_gamma_above_pi": min(map(abs, above), default=np.pi)}
    return Table(rows, summary)


AB_DEFAULTS = {"eta": 0.3, "delta_theta": 1.5 * np.pi, "mode": 1, "steps": 401, "quadrature_nodes": 4096}


def run_ab_sweep(config, seed=None) -> Table:
    """Geometric phase of the flux-threaded box versus its angular position."""
    cfg = _validated(config, AB_DEFAULTS)
    ab = ABConfig(_number(cfg, "eta"), _number(cfg, "delta_theta"),
                  _number(cfg, "mode", integer=True), _number(cfg, "quadrature_nodes", integer=True))
    steps = _number(cfg, "steps", positive=True, integer=True)
    pts = ab_sweep(ab, steps)
    rows = [{"theta": p.theta, "regime": regime(ab, p.theta), "gamma_wrapped": p.gamma_wrapped,
             "gamma_unwrapped": p.gamma_unwrapped, "overlap_abs": p.overlap_abs} for p in pts]
    case_a = [abs(r["gamma_wrapped"]) for r in rows if r["regime"] == "a"]
    summary = {"eta": ab.eta, "delta_theta": ab.delta_theta, "mode": ab.mode,
               "gamma_unwrapped_start": rows[0]["gamma_unwrapped"],
               "gamma_wrapped_end": rows[-1]["gamma_wrapped"],
               "gamma_unwrapped_end": rows[-1]["gamma_unwrapped"],
               "max_abs_gamma_case_a": max(case_a, default=0.0)}
    return Table(rows, summary)


SPIN_DEFAULTS = {"theta0": None, "path": "octant", "omega_B": 1.0, "t": 400.0, "shots": None,
                 "oracle": True, "dt": None, "schedule": "smooth", "verbose": False}


def run_spin_experiment(config, seed=None) -> Table:
    """Polarization of a spin dragged by a rotating field, analytic and propagated."""
    cfg = _validated(config, SPIN_DEFAULTS)
    theta0 = None if cfg["theta0"] is None else _number(cfg, "theta0")
    path = _sphere_path(cfg["path"], theta0)
    if theta0 is None:
        theta0 = float(path.theta[0])
    if cfg["schedule"] not in ("smooth", "file"):
        raise SchemaError("schedule must be 'smooth' or 'file'")
    schedule = None
    if cfg["schedule"] == "file":
        if isinstance(cfg["path"], str) and cfg["path"] in ("octant", "equator-quarter"):
            raise SchemaError("schedule 'file' needs a path with its own time stamps")
        schedule = _load_parameter_path(cfg["path"])
    shots = cfg["shots"]
    if shots is not None:
        shots = _number(cfg, "shots", positive=True, integer=True)
    res = polarization_z(theta0, path, _number(cfg, "omega_B", positive=True), _number(cfg, "t"),
                         oracle=bool(cfg["oracle"]), schedule=schedule, shots=shots, seed=seed,
                         dt=cfg["dt"])
    return Table([res.to_json(verbose=bool(cfg["verbose"]))])


GEODESIC_DEFAULTS = {"path": "octant", "level": "+", "samples": 64}


def run_geodesic_closure(config, seed=None) -> Table:
    """Solid angle of path plus shortest closing geodesic, and both phase routes."""
    cfg = _validated(config, GEODESIC_DEFAULTS)
    path = _sphere_path(cfg["path"])
    res = closure_phase(path, cfg["level"], _number(cfg, "samples", positive=True, integer=True))
    row = res.to_json()
    row["gamma_line_integral"] = spin_geometric_phase(path)
    return Table([row])


ORACLE_DEFAULTS = {"duration": None, "multipliers": [1, 3, 9], "target_metric": 0.03,
                   "samples_per_leg": 400, "omega_B": 1.0, "level": "+", "dt": None}


def run_oracle_convergence(config, seed=None) -> Table:
    """Adiabatic versus propagated geometric phase on the octant drive."""
    cfg = _validated(config, ORACLE_DEFAULTS)
    model = spin_model(SpinConfig(_number(cfg, "omega_B", positive=True)))
    spl = _number(cfg, "samples_per_leg", positive=True, integer=True)
    if cfg["duration"] is None:
        base = duration_for_metric(model, lambda T: octant_schedule(T, spl), cfg["level"],
                                   _number(cfg, "target_metric", positive=True))
        durations = [base * float(m) for m in cfg["multipliers"]]
    else:
        durations = [_number(cfg, "duration", positive=True)]
    rows = []
    for T in durations:
        sched = octant_schedule(T, spl)
        ad = geometric_phase(model, sched, cfg["level"])
        orc = oracle_geometric_phase(model, sched, cfg["level"], dt=cfg["dt"])
        rows.append({"duration": T, "metric": adiabaticity_metric(model, sched, cfg["level"]).metric,
                     "gamma_adiabatic": ad.geometric_phase, "gamma_adiabatic_unwrapped": ad.geometric_unwrapped,
                     "gamma_oracle": orc, "gap": abs(float(np.angle(np.exp(1j * (ad.geometric_phase - orc)))))})
    return Table(rows)


CUSTOM_DEFAULTS = {"model": "conical", "model_config": None, "table": None, "path": None,
                   "level": 0, "method": "auto", "output": "phases", "every": 1,
                   "dt": None, "duration_multiplier": 1.0}


def run_custom(config, seed=None) -> Table:
    """Any model along any path file: phase checkpoints or a propagated trajectory."""
    cfg = _validated(config, CUSTOM_DEFAULTS)
    if cfg["path"] is None:
        raise SchemaError("custom scenario needs a 'path'")
    model = _model(cfg["model"], cfg["model_config"], cfg["table"])
    path = _load_parameter_path(cfg["path"])
    if path.dim != model.n_params:
        raise SchemaError(f"path has {path.dim} parameters, model {model.name!r} needs {model.n_params}")
    every = _number(cfg, "every", positive=True, integer=True)
    level = cfg["level"]
    if cfg["output"] == "phases":
        rows = phase_track(model, path, level, method=cfg["method"]).rows()
        keep = sorted(set(range(0, len(rows), every)) | {len(rows) - 1})
        return Table([rows[k] for k in keep])
    if cfg["output"] == "trajectory":
        schedule = path.scaled_to(path.duration * _number(cfg, "duration_multiplier", positive=True))
        start = model.frame(schedule.points[0], level).vector
        traj = propagate(model, schedule, start, dt=cfg["dt"])
        rows = trajectory_rows(traj, level, every)
        if rows[-1]["t"] != float(traj.times[-1]):
            rows.extend(trajectory_rows(traj, level, 1)[-1:])
        dressed = dress(traj)
        summary = {"oracle_geometric_phase": pancharatnam_phase(dressed.states[0], dressed.states[-1]),
                   "norm_drift": traj.norm_drift}
        return Table(rows, summary)
    raise SchemaError("output must be 'phases' or 'trajectory'")


RUNNERS: dict[str, Callable] = {
    "conical-sign-change": run_conical_sign_change,
    "ab-sweep": run_ab_sweep,
    "spin-experiment": run_spin_experiment,
    "geodesic-closure": run_geodesic_closure,
    "oracle-convergence": run_oracle_convergence,
    "custom": run_custom,
}

DEFAULTS = {
    "conical-sign-change": CONICAL_DEFAULTS,
    "ab-sweep": AB_DEFAULTS,
    "spin-experiment": SPIN_DEFAULTS,
    "geodesic-closure": GEODESIC_DEFAULTS,
    "oracle-convergence": ORACLE_DEFAULTS,
    "custom": CUSTOM_DEFAULTS,
}


def run_scenario(scenario: Scenario) -> Table:
    if scenario.name not in RUNNERS:
        raise SchemaError(f"unknown scenario {scenario.name!r}; choose from {sorted(RUNNERS)}")
    if scenario.sweep is not None:
        return sweep(scenario, scenario.sweep["axis"], scenario.sweep["values"])
    return RUNNERS[scenario.name](scenario.config, scenario.seed)


def _sweep_one(args):
    name, config, seed, axis, value = args
    row = {axis: value}
    row.update(RUNNERS[name]({**config, axis: value}, seed).summary_row())
    return row


def sweep(scenario: Scenario, axis: str, values, jobs: int = 1) -> Table:
    """One summary row per value of ``axis``; rows come back in input order."""
    if scenario.name not in RUNNERS:
        raise SchemaError(f"unknown scenario {scenario.name!r}")
    if axis not in DEFAULTS[scenario.name]:
        raise SchemaError(f"unknown sweep axis {axis!r} for {scenario.name}")
    tasks = [(scenario.name, scenario.config, scenario.seed, axis, v) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    return Table(rows)


# ------------------------------------------------------------------ output

def _fmt(x):
    if isinstance(x, (bool, np.bool_)) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in x]
    return x


def _csv_cell(x):
    x = _fmt(x)
    if x is None:
        return "nan"
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    if isinstance(x, list):
        return ";".join(_csv_cell(v) for v in x)
    return str(x)


def render(table: Table, fmt: str = "csv") -> str:
    if fmt == "json":
        rows = [{k: _fmt(v) for k, v in r.items()} for r in table.rows]
        doc = rows[0] if len(rows) == 1 else rows
        if table.summary is not None and len(rows) == 1:
            doc = {**doc, "summary": {k: _fmt(v) for k, v in table.summary.items()}}
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise SchemaError(f"unknown output format {fmt!r}")
    buf = io.StringIO()
    cols = table.columns()
    writer = csv.writer(buf, lineterminator="\n")
    if cols:
        writer.writerow(cols)
    for r in table.rows:
        writer.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()

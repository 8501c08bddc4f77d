"""Time-stamped curves in parameter space and the JSON path format.

File format::

    {"closed": false, "samples": [{"t": 0.0, "R": [0.0]}, ...]}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SchemaError


@dataclass(frozen=True)
class ParameterPath:
    times: np.ndarray
    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).ravel()
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or len(points) != len(times):
            raise SchemaError("path needs one parameter point per time stamp")
        if len(times) < 1:
            raise SchemaError("path needs at least one sample")
        if np.any(np.diff(times) <= 0):
            raise SchemaError("path times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(points))):
            raise SchemaError("path contains non-finite values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "closed", bool(self.closed))

    @classmethod
    def from_points(cls, points, duration=1.0, closed=None, times=None):
        """Uniformly time-stamped path through ``points`` (or with explicit ``times``)."""
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if times is None:
            times = np.linspace(0.0, duration, len(points)) if len(points) > 1 else np.zeros(1)
        if closed is None:
            closed = len(points) > 1 and bool(np.max(np.abs(points[-1] - points[0])) < 1e-10)
        return cls(times, points, closed)

    def __len__(self):
        return len(self.times)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def at(self, t) -> np.ndarray:
        """Parameter point at time t, linear between samples."""
        return np.array([np.interp(t, self.times, self.points[:, j]) for j in range(self.dim)])

    def velocities(self) -> np.ndarray:
        """dR/dt at each sample (second-order differences, one-sided at the ends)."""
        if len(self) < 2:
            return np.zeros_like(self.points)
        if len(self) == 2:
            v = (self.points[1] - self.points[0]) / (self.times[1] - self.times[0])
            return np.vstack([v, v])
        return np.gradient(self.points, self.times, axis=0, edge_order=2)

    def retimed(self, times) -> "ParameterPath":
        return ParameterPath(times, self.points, self.closed)

    def scaled_to(self, duration: float) -> "ParameterPath":
        if len(self) < 2:
            return self
        t = self.times - self.times[0]
        return ParameterPath(t * (duration / t[-1]), self.points, self.closed)

    def to_json(self) -> dict:
        return {
            "closed": self.closed,
            "samples": [{"t": float(t), "R": [float(x) for x in p]} for t, p in zip(self.times, self.points)],
        }

    @classmethod
    def from_json(cls, data) -> "ParameterPath":
        try:
            samples = data["samples"]
            times = [float(s["t"]) for s in samples]
            points = [[float(x) for x in np.atleast_1d(s["R"])] for s in samples]
            closed = bool(data.get("closed", False))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed path document: {exc!r}") from None
        if len({len(p) for p in points}) > 1:
            raise SchemaError("all path samples must have the same parameter dimension")
        return cls(np.array(times), np.array(points), closed)


def load_path(filename) -> ParameterPath:
    try:
        data = json.loads(Path(filename).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read path file {filename}: {exc}") from None
    return ParameterPath.from_json(data)


def save_path(path: ParameterPath, filename) -> None:
    Path(filename).write_text(json.dumps(path.to_json(), indent=1))


def smootherstep(x):
    """6x^5 - 15x^4 + 10x^3: zero first and second derivative at both ends."""
    x = np.clip(x, 0.0, 1.0)
    return x**3 * (x * (6 * x - 15) + 10)


def leg_schedule(waypoints, duration, samples_per_leg=400, metric=None):
    """Piecewise-linear path through ``waypoints`` that comes to rest at each one.

    Each leg is traversed with a smootherstep time profile so the drive
    velocity and acceleration vanish at every corner; leg durations are
    proportional to leg length (Euclidean in parameter space unless
    ``metric(p, q)`` is given).
    """
    waypoints = np.asarray(waypoints, dtype=float)
    if waypoints.ndim == 1:
        waypoints = waypoints[:, None]
    if len(waypoints) < 2:
        raise SchemaError("leg_schedule needs at least two waypoints")
    if metric is None:
        lengths = np.linalg.norm(np.diff(waypoints, axis=0), axis=1)
    else:
        lengths = np.array([metric(p, q) for p, q in zip(waypoints[:-1], waypoints[1:])])
    if lengths.sum() <= 0:
        raise SchemaError("waypoints do not move")
    leg_T = duration * lengths / lengths.sum()
    u = np.linspace(0.0, 1.0, samples_per_leg + 1)
    times, points, t0 = [np.zeros(1)], [waypoints[:1]], 0.0
    for k, T in enumerate(leg_T):
        if T <= 0:
            continue
        s = smootherstep(u[1:])
        times.append(t0 + T * u[1:])
        points.append(waypoints[k] + s[:, None] * (waypoints[k + 1] - waypoints[k]))
        t0 += T
    return ParameterPath(np.concatenate(times), np.vstack(points))

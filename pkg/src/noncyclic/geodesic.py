"""Bloch-sphere paths, great-circle closure and enclosed solid angles.

For a two-level system the noncyclic phase of level +/- equals -/+ half the
solid angle enclosed by the path together with the shortest geodesic that
joins its end back to its start.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AntipodalError, ResolutionError, SchemaError
from .paths import ParameterPath
from .util import wrap

ANTIPODAL_EPS = 1e-9
NORTH = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class SpherePath:
    """Ordered points on the unit sphere stored as polar/azimuthal angles.

    Azimuths are kept continuous (unwrapped) so line integrals in Phi see
    no branch cut.
    """

    theta: np.ndarray
    phi: np.ndarray
    closed: bool = False

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        if theta.shape != phi.shape or theta.ndim != 1 or theta.size < 1:
            raise SchemaError("SpherePath needs matching 1-D theta and phi arrays")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vectors(cls, vectors, closed=False):
        v = np.asarray(vectors, dtype=float).reshape(-1, 3)
        norms = np.linalg.norm(v, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            v = v / norms[:, None]
        theta = np.arccos(np.clip(v[:, 2], -1.0, 1.0))
        rho = np.hypot(v[:, 0], v[:, 1])
        phi = np.arctan2(v[:, 1], v[:, 0])
        # azimuth is meaningless at the poles; borrow the nearest defined one
        at_pole = rho < 1e-14
        if at_pole.all():
            phi[:] = 0.0
        elif at_pole.any():
            idx = np.flatnonzero(~at_pole)
            phi[at_pole] = phi[idx[np.abs(idx[:, None] - np.flatnonzero(at_pole)).argmin(axis=0)]]
        return cls(theta, np.unwrap(phi), closed)

    @classmethod
    def from_parameter_path(cls, path: ParameterPath):
        if path.dim != 2:
            raise SchemaError("sphere paths are (Theta, Phi) parameter paths")
        return cls(path.points[:, 0], path.points[:, 1], path.closed)

    def to_parameter_path(self, duration=1.0) -> ParameterPath:
        return ParameterPath.from_points(np.column_stack([self.theta, self.phi]), duration, closed=self.closed)

    def __len__(self):
        return self.theta.size

    @property
    def vectors(self) -> np.ndarray:
        s = np.sin(self.theta)
        return np.column_stack([s * np.cos(self.phi), s * np.sin(self.phi), np.cos(self.theta)])

    @property
    def start(self) -> np.ndarray:
        return self.vectors[0]

    @property
    def end(self) -> np.ndarray:
        return self.vectors[-1]

    def reversed(self) -> "SpherePath":
        return SpherePath(self.theta[::-1], self.phi[::-1], self.closed)

    def then(self, other: "SpherePath", closed=False) -> "SpherePath":
        """Concatenate, dropping ``other``'s first point when it repeats our last."""
        th, ph = other.theta, other.phi
        if np.linalg.norm(other.start - self.end) < 1e-12:
            th, ph = th[1:], ph[1:]
        if th.size:
            # keep the azimuth continuous across the junction
            ph = ph + 2 * np.pi * np.round((self.phi[-1] - ph[0]) / (2 * np.pi))
        return SpherePath(np.concatenate([self.theta, th]), np.concatenate([self.phi, ph]), closed)


@dataclass(frozen=True)
class SolidAngleResult:
    omega_gc: float
    omega_raw: float
    geodesic: SpherePath
    phase_plus: float
    phase_minus: float
    level: str = "+"

    @property
    def phase(self) -> float:
        return self.phase_plus if self.level == "+" else self.phase_minus

    def to_json(self) -> dict:
        return {"omega_gc": self.omega_gc, "phase_plus": self.phase_plus, "phase_minus": self.phase_minus}


def great_circle_angle(p, q) -> float:
    return float(np.arctan2(np.linalg.norm(np.cross(p, q)), np.dot(p, q)))


def geodesic_arc(p0, p1, samples=64, eps=ANTIPODAL_EPS) -> SpherePath:
    """Shortest great-circle arc from ``p1`` back to ``p0`` (closure direction)."""
    p0 = np.asarray(p0, dtype=float) / np.linalg.norm(p0)
    p1 = np.asarray(p1, dtype=float) / np.linalg.norm(p1)
    if np.dot(p0, p1) <= -1.0 + eps:
        raise AntipodalError("endpoints are antipodal: every great circle through them is a shortest geodesic")
    omega = great_circle_angle(p1, p0)
    if omega < 1e-15:
        return SpherePath.from_vectors(p1[None, :])
    if samples < 2:
        raise SchemaError("geodesic arc needs at least two samples")
    u = np.linspace(0.0, 1.0, samples)
    pts = (np.sin((1 - u) * omega)[:, None] * p1 + np.sin(u * omega)[:, None] * p0) / np.sin(omega)
    pts[-1] = p0
    return SpherePath.from_vectors(pts)


def _triangle_area(a, b, c):
    """Signed solid angle of the geodesic triangle a, b, c (Van Oosterom-Strackee)."""
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) + np.einsum("ij,ij->i", c, a)
    return 2.0 * np.arctan2(num, den)


def _edges(path: SpherePath):
    v = path.vectors
    if np.linalg.norm(v[-1] - v[0]) > 1e-10:
        v = np.vstack([v, v[:1]])
    return v[:-1], v[1:]


def solid_angle_raw(path: SpherePath) -> float:
    """Accumulated line integral of (1 - cos Theta) dPhi around a closed path.

    Each edge is taken along its great circle and integrated in closed form
    (the signed area of the triangle it spans with the north pole), which
    sidesteps the azimuth branch cut entirely. Loops winding several times
    keep their full value.
    """
    if not path.closed and np.linalg.norm(path.end - path.start) > 1e-10:
        raise SchemaError("solid angle needs a closed path")
    a, b = _edges(path)
    if a.size and np.max(np.arccos(np.clip(np.einsum("ij,ij->i", a, b), -1, 1))) >= np.pi / 2:
        raise ResolutionError("consecutive samples separated by pi/2 or more; refine the path")
    north = np.broadcast_to(NORTH, a.shape)
    return float(np.sum(_triangle_area(north, a, b)))


def solid_angle(path: SpherePath) -> float:
    """Signed solid angle enclosed by a closed path, reported in (-2pi, 2pi]."""
    raw = solid_angle_raw(path)
    return 2.0 * wrap(raw / 2.0)


def fan_excess(path: SpherePath) -> float:
    """Cross-check: spherical excess of the fan triangulation from the first vertex."""
    a, b = _edges(path)
    apex = np.broadcast_to(a[0], a.shape)
    return float(np.sum(_triangle_area(apex, a, b)))


def closure_phase(open_path: SpherePath, level="+", samples=64) -> SolidAngleResult:
    """Close ``open_path`` with its shortest geodesic and return -/+ Omega_gc / 2."""
    if level not in ("+", "-"):
        raise SchemaError(f"level must be '+' or '-', got {level!r}")
    arc = geodesic_arc(open_path.start, open_path.end, samples)
    loop = open_path.then(arc, closed=True)
    raw = solid_angle_raw(loop)
    omega = 2.0 * wrap(raw / 2.0)
    return SolidAngleResult(omega, raw, arc, wrap(-raw / 2.0), wrap(raw / 2.0), level)


def octant_path(samples_per_leg=500) -> SpherePath:
    """Open path x -> y along the equator, then y -> north pole along Phi = pi/2.

    Its geodesic closure (pole back down to x along Phi = 0) bounds one
    quarter of the upper hemisphere with counter-clockwise orientation.
    """
    n = samples_per_leg
    theta = np.concatenate([np.full(n, np.pi / 2), np.linspace(np.pi / 2, 0.0, n + 1)])
    phi = np.concatenate([np.linspace(0.0, np.pi / 2, n, endpoint=False), np.full(n + 1, np.pi / 2)])
    return SpherePath(theta, phi)


def octant_waypoints():
    """Corners of :func:`octant_path` in (Theta, Phi)."""
    return np.array([[np.pi / 2, 0.0], [np.pi / 2, np.pi / 2], [0.0, np.pi / 2]])


def latitude_loop(theta, samples=1001, turns=1) -> SpherePath:
    phi = np.linspace(0.0, 2 * np.pi * turns, samples)
    return SpherePath(np.full(samples, float(theta)), phi, closed=True)

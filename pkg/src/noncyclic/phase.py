"""Noncyclic adiabatic geometric phase along sampled parameter paths.

The connection phase is discretized as ``-sum_k arg<n_k|n_{k+1}>`` and the
geometric phase as ``arg<n_0|n_N> + connection``; this combination is
invariant under rephasing of every individual sample, so no gauge
smoothing is needed for correctness. When a model registers a closed-form
connection and its own analytic frames are used, the connection is instead
integrated by the trapezoid rule along the path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegeneracyError, ResolutionError, SchemaError, UndefinedPhaseError
from .models import DEGENERACY_THRESHOLD, EigenFrame, HamiltonianModel
from .paths import ParameterPath
from .util import ORTHOGONALITY_THRESHOLD, principal_arg, unwrap_defined, wrap


@dataclass(frozen=True)
class PhaseDecomposition:
    energy_phase: float
    connection_phase: float
    overlap_phase: float
    geometric_phase: float
    geometric_unwrapped: float
    total_phase: float


@dataclass(frozen=True)
class PhaseTrack:
    """Cumulative phases at every path sample; NaN where the overlap is undefined."""

    times: np.ndarray
    energy_phase: np.ndarray
    connection_phase: np.ndarray
    overlap_phase: np.ndarray
    geometric_phase: np.ndarray
    geometric_unwrapped: np.ndarray
    total_phase: np.ndarray

    def at(self, k: int = -1) -> PhaseDecomposition:
        if np.isnan(self.overlap_phase[k]):
            raise UndefinedPhaseError(
                f"endpoint eigenvectors are orthogonal at sample {k % len(self.times)}; geometric phase undefined"
            )
        return PhaseDecomposition(
            float(self.energy_phase[k]),
            float(self.connection_phase[k]),
            float(self.overlap_phase[k]),
            float(self.geometric_phase[k]),
            float(self.geometric_unwrapped[k]),
            float(self.total_phase[k]),
        )

    def rows(self):
        cols = ("t", "energy", "connection", "overlap", "geometric_wrapped", "geometric_unwrapped", "total")
        data = (self.times, self.energy_phase, self.connection_phase, self.overlap_phase,
                self.geometric_phase, self.geometric_unwrapped, self.total_phase)
        return [dict(zip(cols, map(float, vals))) for vals in zip(*data)]


@dataclass(frozen=True)
class AdiabaticityReport:
    metric: float
    worst_time: float
    worst_level: int


@dataclass(frozen=True)
class GaugeFunction:
    """Phase lambda(R(t_k)) applied to the eigenvector at each path sample."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).ravel())


def overlap_phase(frame0, frame1, threshold=ORTHOGONALITY_THRESHOLD) -> float:
    """arg<n;R(0)|n;R(t)> in (-pi, pi]."""
    return principal_arg(np.vdot(_vec(frame0), _vec(frame1)), threshold)


def frames_along(model: HamiltonianModel, path: ParameterPath, level, analytic=True,
                 threshold=DEGENERACY_THRESHOLD) -> list:
    return [model.frame(p, level, analytic=analytic, threshold=threshold) for p in path.points]


def _vec(frame):
    return frame.vector if isinstance(frame, EigenFrame) else np.asarray(frame, dtype=complex)


def _segment_phases(frames, threshold=ORTHOGONALITY_THRESHOLD):
    vecs = np.array([_vec(f) for f in frames])
    ovs = np.einsum("ki,ki->k", vecs[:-1].conj(), vecs[1:])
    bad = np.flatnonzero(np.abs(ovs) <= threshold)
    if bad.size:
        k = int(bad[0])
        raise ResolutionError(
            f"consecutive frames {k} and {k + 1} nearly orthogonal (|overlap|={abs(ovs[k]):.2e}); refine the path"
        )
    return np.angle(ovs)


def _connection_increments(frames, path, connection_values=None, threshold=ORTHOGONALITY_THRESHOLD):
    if len(frames) < 2:
        return np.zeros(0)
    if connection_values is None:
        return -_segment_phases(frames, threshold)
    A = np.asarray(connection_values, dtype=float)
    dR = np.diff(path.points, axis=0)
    return 0.5 * np.einsum("kj,kj->k", A[:-1] + A[1:], dR)


def connection_integral(frames: Sequence, path: Optional[ParameterPath] = None,
                        connection_values=None, threshold=ORTHOGONALITY_THRESHOLD) -> float:
    """Connection phase alpha_n(t) - alpha_n(0) along the sampled path.

    With ``connection_values`` (one vector ``i<n|d_j n>`` per sample) the
    line integral is done by the trapezoid rule over ``path``; otherwise it
    is read off the frames as ``-sum_k arg<n_k|n_{k+1}>``.
    """
    if connection_values is not None and path is None:
        raise SchemaError("closed-form connection needs the path it is integrated along")
    return float(np.sum(_connection_increments(list(frames), path, connection_values, threshold)))


def _resolve_method(model, method, frames):
    if method not in ("auto", "overlap", "analytic"):
        raise SchemaError(f"unknown phase method {method!r}")
    has_closed_form = model is not None and model.connection is not None and model.analytic_frames is not None
    if method == "analytic" and not has_closed_form:
        raise SchemaError("model registers no closed-form connection")
    if method == "auto":
        return "analytic" if has_closed_form and frames is None else "overlap"
    return method


def phase_track(model: Optional[HamiltonianModel], path: ParameterPath, level=None, *,
                frames=None, method="auto", threshold=ORTHOGONALITY_THRESHOLD) -> PhaseTrack:
    """Energy, connection, overlap and geometric phases at every path sample.

    Pass ``frames`` to use a custom gauge (e.g. after :func:`apply_gauge`);
    they must be one per path sample.
    """
    method = _resolve_method(model, method, frames)
    if frames is None:
        if model is None:
            raise SchemaError("phase_track needs a model or explicit frames")
        frames = frames_along(model, path, level, analytic=True)
    frames = list(frames)
    if len(frames) != len(path):
        raise SchemaError(f"{len(frames)} frames for a path of {len(path)} samples")
    conn_vals = None
    if method == "analytic":
        lvl = model.level(level)
        conn_vals = np.array([model.connection(p, lvl) for p in path.points])
    increments = _connection_increments(frames, path, conn_vals, threshold)
    connection = np.concatenate([[0.0], np.cumsum(increments)])

    v0 = _vec(frames[0])
    ovs = np.array([np.vdot(v0, _vec(f)) for f in frames])
    overlap = np.where(np.abs(ovs) > threshold, wrap(np.angle(ovs)), np.nan)
    geometric = wrap(overlap + connection)
    geometric = np.where(np.isnan(overlap), np.nan, geometric)
    unwrapped = unwrap_defined(geometric)

    energies = np.array([f.energy for f in frames])
    dt = np.diff(path.times)
    energy = -np.concatenate([[0.0], np.cumsum(0.5 * (energies[:-1] + energies[1:]) * dt)])
    return PhaseTrack(path.times.copy(), energy, connection, overlap, geometric, unwrapped, unwrapped + energy)


def geometric_phase(model: Optional[HamiltonianModel], path: ParameterPath, level=None, *,
                    frames=None, method="auto", threshold=ORTHOGONALITY_THRESHOLD) -> PhaseDecomposition:
    """Phase decomposition at the end of ``path`` for the given level.

    Raises UndefinedPhaseError when the endpoint eigenvectors are orthogonal.
    """
    return phase_track(model, path, level, frames=frames, method=method, threshold=threshold).at(-1)


def energy_phase(model: HamiltonianModel, path: ParameterPath, level) -> float:
    """-integral of E_n dt, trapezoid rule on the path's time stamps."""
    if len(path) < 2:
        return 0.0
    E = np.array([model.frame(p, level).energy for p in path.points])
    return float(-np.sum(0.5 * (E[:-1] + E[1:]) * np.diff(path.times)))


def adiabaticity_metric(model: HamiltonianModel, path: ParameterPath, level,
                        threshold=DEGENERACY_THRESHOLD, step=1e-5) -> AdiabaticityReport:
    """max over samples and m != n of |<n|dH/dt|m>| / (E_n - E_m)^2.

    dH/dt is assembled by the chain rule from dH/dR (registered gradient,
    else centered differences with relative step ``step``) and the path
    velocity.
    """
    n = model.level(level)
    vel = path.velocities()
    best = AdiabaticityReport(0.0, float(path.times[0]), -1)
    for t, p, v in zip(path.times, path.points, vel):
        H = model.hamiltonian(p)
        E, U = np.linalg.eigh(H)
        gaps = np.abs(E - E[n])
        gaps[n] = np.inf
        if gaps.min() < threshold:
            raise DegeneracyError(f"gap {gaps.min():.3e} below threshold at t={t}")
        Hdot = np.tensordot(v, model.dH(p, step), axes=1)
        couplings = np.abs(U[:, n].conj() @ Hdot @ U)
        ratios = couplings / gaps**2
        m = int(np.argmax(ratios))
        if best.worst_level < 0 or ratios[m] > best.metric:
            best = AdiabaticityReport(float(ratios[m]), float(t), m)
    return best


def apply_gauge(frames, gauge) -> list:
    """Multiply the k-th frame vector by exp(i lambda_k); energies untouched."""
    values = gauge.values if isinstance(gauge, GaugeFunction) else np.asarray(gauge, dtype=float).ravel()
    frames = list(frames)
    if len(values) != len(frames):
        raise SchemaError(f"gauge has {len(values)} values for {len(frames)} frames")
    return [f.rephased(lam) for f, lam in zip(frames, values)]

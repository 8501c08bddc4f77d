"""Parametrized two-level (and tabulated) Hamiltonians with eigenframes.

Units: hbar = 1 and every parameter is dimensionless. Levels are indexed in
ascending order of energy, so for the spin model the field-aligned state
``+`` is level 0 while for the conical model ``+`` is level 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegeneracyError, DomainError, ResolutionError, SchemaError
from .util import ORTHOGONALITY_THRESHOLD

DEGENERACY_THRESHOLD = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


@dataclass(frozen=True)
class EigenFrame:
    level: int
    energy: float
    vector: np.ndarray
    point: np.ndarray
    gap: float

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex)
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > 1e-12:
            vec = vec / norm
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "point", np.atleast_1d(np.asarray(self.point, dtype=float)))
        if not self.gap > 0:
            raise DegeneracyError(f"level {self.level} has gap {self.gap:g} at R={self.point}")

    def rephased(self, phase: float) -> "EigenFrame":
        """Copy with the vector multiplied by exp(i*phase)."""
        return EigenFrame(self.level, self.energy, self.vector * np.exp(1j * phase), self.point, self.gap)


@dataclass(frozen=True)
class SpinConfig:
    """Larmor frequency omega_B = mu*B/hbar of the field magnitude."""

    omega_B: float = 1.0

    def __post_init__(self):
        if not self.omega_B > 0:
            raise DomainError(f"omega_B must be positive, got {self.omega_B}")


@dataclass(frozen=True)
class HamiltonianModel:
    """A map R -> H(R) with optional closed-form eigen-data.

    ``analytic_frames(point, level)`` returns an EigenFrame in a fixed,
    documented gauge. ``connection(point, level)`` returns the connection
    one-form components ``i<n|d_j n>`` in that same gauge, and
    ``gradient(point)`` the stack of ``dH/dR_j``.
    """

    name: str
    dimension: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    parameter_names: Sequence[str]
    analytic_frames: Optional[Callable[[np.ndarray, int], EigenFrame]] = None
    connection: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    level_labels: dict = field(default_factory=dict)

    @property
    def n_params(self) -> int:
        return len(self.parameter_names)

    def level(self, label) -> int:
        """Resolve ``"+"``/``"-"`` (or an int) to an ascending-order index."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.dimension:
                raise SchemaError(f"level {label} out of range for dimension {self.dimension}")
            return int(label)
        try:
            return self.level_labels[label]
        except KeyError:
            raise SchemaError(f"unknown level label {label!r} for model {self.name}") from None

    def hamiltonian(self, point) -> np.ndarray:
        return np.asarray(self.evaluate(np.atleast_1d(np.asarray(point, dtype=float))), dtype=complex)

    def frame(self, point, level, analytic=True, threshold=DEGENERACY_THRESHOLD) -> EigenFrame:
        level = self.level(level)
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if analytic and self.analytic_frames is not None:
            return self.analytic_frames(point, level)
        return eigensolve(self.hamiltonian(point), level, point=point, threshold=threshold)

    def dH(self, point, step=1e-5) -> np.ndarray:
        """Stack of partial derivatives dH/dR_j, shape (n_params, dim, dim)."""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if self.gradient is not None:
            return np.asarray(self.gradient(point), dtype=complex)
        out = np.empty((point.size, self.dimension, self.dimension), dtype=complex)
        for j in range(point.size):
            h = step * max(abs(point[j]), 1.0)
            e = np.zeros_like(point)
            e[j] = h
            out[j] = (self.hamiltonian(point + e) - self.hamiltonian(point - e)) / (2 * h)
        return out


def eigensolve(H, level, point=None, threshold=DEGENERACY_THRESHOLD) -> EigenFrame:
    """Numerical eigenpair of a Hermitian matrix.

    The gauge is fixed deterministically: the largest-modulus component of
    the eigenvector (first one on ties) is made real and positive.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if not 0 <= level < n:
        raise SchemaError(f"level {level} out of range for dimension {n}")
    energies, vectors = np.linalg.eigh(H)
    others = np.delete(energies, level)
    gap = float(np.min(np.abs(others - energies[level]))) if others.size else np.inf
    if gap < threshold:
        raise DegeneracyError(f"level {level} gap {gap:.3e} below threshold {threshold:g}")
    vec = vectors[:, level]
    k = int(np.argmax(np.abs(vec) - 1e-12 * np.arange(n)))
    vec = vec * (abs(vec[k]) / vec[k])
    vec[k] = abs(vec[k])
    if point is None:
        point = np.zeros(0)
    return EigenFrame(level, float(energies[level]), vec, point, gap)


def phase_smooth(frames, threshold=ORTHOGONALITY_THRESHOLD):
    """Rephase frames so every consecutive overlap is real and positive.

    The first frame is left untouched.
    """
    frames = list(frames)
    if not frames:
        return frames
    out = [frames[0]]
    for k, frame in enumerate(frames[1:], start=1):
        ov = np.vdot(out[-1].vector, frame.vector)
        if abs(ov) <= threshold:
            raise ResolutionError(
                f"frames {k - 1} and {k} are nearly orthogonal (|overlap|={abs(ov):.2e}); refine sampling"
            )
        out.append(frame.rephased(-np.angle(ov)))
    return out


# --- conical intersection ---------------------------------------------------

def conical_model(R_magnitude: float = 1.0) -> HamiltonianModel:
    """H(Phi) = R (sin Phi sigma_x + cos Phi sigma_z) at fixed radius R > 0.

    Analytic frames use the real gauge (cos Phi/2, sin Phi/2) for ``+`` and
    (-sin Phi/2, cos Phi/2) for ``-``; their connection vanishes.
    """
    R = float(R_magnitude)
    if not R > 0:
        raise DomainError(f"R must be positive (R = 0 is the conical intersection), got {R}")

    def evaluate(p):
        phi = p[0]
        return R * (np.sin(phi) * SIGMA_X + np.cos(phi) * SIGMA_Z)

    def gradient(p):
        phi = p[0]
        return (R * (np.cos(phi) * SIGMA_X - np.sin(phi) * SIGMA_Z))[None]

    def frames(p, level):
        c, s = np.cos(p[0] / 2), np.sin(p[0] / 2)
        if level == 1:
            return EigenFrame(1, R, np.array([c, s], dtype=complex), p, 2 * R)
        return EigenFrame(0, -R, np.array([-s, c], dtype=complex), p, 2 * R)

    return HamiltonianModel(
        name="conical",
        dimension=2,
        evaluate=evaluate,
        parameter_names=("Phi",),
        analytic_frames=frames,
        connection=lambda p, level: np.zeros(1),
        gradient=gradient,
        level_labels={"+": 1, "-": 0},
    )


# --- spin in a rotating field -----------------------------------------------

def field_direction(theta, phi):
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def spin_model(config: SpinConfig = SpinConfig()) -> HamiltonianModel:
    """H(Theta, Phi) = -omega_B e(Theta, Phi) . sigma.

    Frames follow the half-angle gauge
    |+> = (e^{-i Phi/2} cos Theta/2, e^{i Phi/2} sin Theta/2),
    |-> = (-e^{-i Phi/2} sin Theta/2, e^{i Phi/2} cos Theta/2),
    with E_+ = -omega_B (level 0) and E_- = +omega_B (level 1).
    """
    w = config.omega_B

    def evaluate(p):
        s = np.sin(p[0])
        x, y, z = s * np.cos(p[1]), s * np.sin(p[1]), np.cos(p[0])
        return -w * np.array([[z, x - 1j * y], [x + 1j * y, -z]])

    def gradient(p):
        th, ph = p[0], p[1]
        d_th = np.array([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)])
        d_ph = np.array([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), 0.0])
        return -w * np.stack([np.tensordot(d_th, PAULI, axes=1), np.tensordot(d_ph, PAULI, axes=1)])

    def frames(p, level):
        th, ph = p[0], p[1]
        c, s = np.cos(th / 2), np.sin(th / 2)
        em, ep = np.exp(-0.5j * ph), np.exp(0.5j * ph)
        if level == 0:
            return EigenFrame(0, -w, np.array([em * c, ep * s]), p, 2 * w)
        return EigenFrame(1, w, np.array([-em * s, ep * c]), p, 2 * w)

    def connection(p, level):
        sign = 1.0 if level == 0 else -1.0
        return np.array([0.0, sign * 0.5 * np.cos(p[0])])

    return HamiltonianModel(
        name="spin",
        dimension=2,
        evaluate=evaluate,
        parameter_names=("Theta", "Phi"),
        analytic_frames=frames,
        connection=connection,
        gradient=gradient,
        level_labels={"+": 0, "-": 1},
    )


def spin_vector_model() -> HamiltonianModel:
    """H(b) = -b . sigma over Cartesian field vectors b (Larmor units).

    The three-dimensional parameter space is what the curvature routines
    need; the level ``+`` (aligned with b) is level 0.
    """

    def evaluate(p):
        return -np.tensordot(p, PAULI, axes=1)

    return HamiltonianModel(
        name="spin-vector",
        dimension=2,
        evaluate=evaluate,
        parameter_names=("b_x", "b_y", "b_z"),
        gradient=lambda p: -PAULI,
        level_labels={"+": 0, "-": 1},
    )


# --- tabulated --------------------------------------------------------------

def tabulated_model(entries) -> HamiltonianModel:
    """Model from a table ``[{"point": [...], "matrix": [[[re, im], ...], ...]}, ...]``.

    One-parameter tables are interpolated linearly per matrix element;
    higher-dimensional ones by piecewise-linear interpolation on a Delaunay
    triangulation. Both preserve Hermiticity and reproduce table points
    exactly.
    """
    try:
        points = np.array([np.atleast_1d(np.asarray(e["point"], dtype=float)) for e in entries])
        mats = np.array([np.asarray(e["matrix"], dtype=float) for e in entries])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad custom model table: {exc}") from None
    if mats.ndim != 4 or mats.shape[-1] != 2 or mats.shape[1] != mats.shape[2]:
        raise SchemaError("matrix entries must be square tables of [re, im] pairs")
    if len(points) < 2:
        raise SchemaError("custom model table needs at least two grid points")
    mats = mats[..., 0] + 1j * mats[..., 1]
    herm = np.max(np.abs(mats - np.conj(np.swapaxes(mats, 1, 2))))
    if herm > 1e-12:
        raise SchemaError(f"tabulated matrices are not Hermitian (max deviation {herm:.2e})")
    dim = mats.shape[1]
    n_params = points.shape[1]

    if n_params == 1:
        order = np.argsort(points[:, 0])
        xs, table = points[order, 0], mats[order].reshape(len(points), -1)

        def evaluate(p):
            if not xs[0] - 1e-12 <= p[0] <= xs[-1] + 1e-12:
                raise SchemaError(f"point {p[0]} outside tabulated range [{xs[0]}, {xs[-1]}]")
            re = [np.interp(p[0], xs, table[:, j].real) for j in range(table.shape[1])]
            im = [np.interp(p[0], xs, table[:, j].imag) for j in range(table.shape[1])]
            return (np.array(re) + 1j * np.array(im)).reshape(dim, dim)

    else:
        from scipy.interpolate import LinearNDInterpolator

        interp = LinearNDInterpolator(points, mats.reshape(len(points), -1))

        def evaluate(p):
            val = interp(p[None, :])[0]
            if np.any(np.isnan(val)):
                raise SchemaError(f"point {p} outside the tabulated grid")
            return val.reshape(dim, dim)

    return HamiltonianModel(
        name="custom",
        dimension=dim,
        evaluate=evaluate,
        parameter_names=tuple(f"R{j}" for j in range(n_params)),
    )

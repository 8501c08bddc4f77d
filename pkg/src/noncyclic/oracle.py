"""Exact time-dependent propagation and the Pancharatnam phase of its result.

This is the independent check on the adiabatic phase: the state is evolved
with classical RK4 under H(R(t)), the expectation-value dynamical phase is
stripped off, and the argument of the endpoint overlap is read off. Nothing
here uses eigenvector phase conventions beyond the initial state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NormDriftError, StepSizeError
from .models import HamiltonianModel, phase_smooth
from .paths import ParameterPath
from .util import ORTHOGONALITY_THRESHOLD, principal_arg

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StateTrajectory:
    times: np.ndarray
    states: np.ndarray
    expectations: np.ndarray
    norm_drift: float
    model: HamiltonianModel
    schedule: ParameterPath


@dataclass(frozen=True)
class DressedTrajectory:
    times: np.ndarray
    states: np.ndarray


def max_hamiltonian_norm(model, schedule) -> float:
    return max(np.linalg.norm(model.hamiltonian(p), 2) for p in schedule.points)


def default_dt(model, schedule) -> float:
    """Largest step keeping dt*||H|| <= 0.05 and below half the schedule spacing."""
    dt = 0.05 / max(max_hamiltonian_norm(model, schedule), 1e-12)
    if len(schedule) > 1:
        dt = min(dt, 0.5 * float(np.min(np.diff(schedule.times))))
    return dt


def propagate(model: HamiltonianModel, schedule: ParameterPath, initial, dt=None,
              norm_tol=NORM_TOLERANCE) -> StateTrajectory:
    """Integrate i d|psi>/dt = H(R(t))|psi> across the schedule with RK4.

    Parameters are interpolated linearly between schedule samples. The
    state is renormalized after each step; the largest pre-renormalization
    norm deviation is reported as ``norm_drift`` and must stay below
    ``norm_tol``.
    """
    psi = np.asarray(initial, dtype=complex).copy()
    psi /= np.linalg.norm(psi)
    hmax = max_hamiltonian_norm(model, schedule)
    if dt is None:
        dt = default_dt(model, schedule)
    if dt <= 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if dt * hmax >= 0.1:
        raise StepSizeError(f"dt*max||H|| = {dt * hmax:.3g} >= 0.1; reduce dt")
    if len(schedule) > 1 and dt >= np.min(np.diff(schedule.times)):
        raise StepSizeError("dt must be smaller than the schedule sample spacing")

    T = schedule.duration
    n_steps = max(1, math.ceil(T / dt - 1e-9)) if T > 0 else 0
    h = T / n_steps if n_steps else 0.0
    t0 = float(schedule.times[0])
    # parameters at every step and half step, interpolated in one pass
    grid = t0 + 0.5 * h * np.arange(2 * n_steps + 1)
    params = np.column_stack([np.interp(grid, schedule.times, schedule.points[:, j])
                              for j in range(schedule.dim)])
    Hs = [model.hamiltonian(p) for p in params]

    times = grid[::2].copy()
    states = np.empty((n_steps + 1, psi.size), dtype=complex)
    states[0] = psi
    drift = 0.0
    for k in range(n_steps):
        H0, Hm, H1 = Hs[2 * k], Hs[2 * k + 1], Hs[2 * k + 2]
        k1 = -1j * (H0 @ psi)
        k2 = -1j * (Hm @ (psi + 0.5 * h * k1))
        k3 = -1j * (Hm @ (psi + 0.5 * h * k2))
        k4 = -1j * (H1 @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = math.sqrt((psi.real @ psi.real) + (psi.imag @ psi.imag))
        drift = max(drift, abs(norm - 1.0))
        psi /= norm
        states[k + 1] = psi
    expect = np.einsum("ki,kij,kj->k", states.conj(), np.array(Hs[::2]), states).real
    if drift > norm_tol:
        raise NormDriftError(f"norm drift {drift:.2e} exceeds {norm_tol:g}; reduce dt")
    return StateTrajectory(times, states, expect, drift, model, schedule)


def dress(trajectory: StateTrajectory) -> DressedTrajectory:
    """Remove exp(-i int <psi|H|psi> dt) (trapezoid) from every state."""
    t, e = trajectory.times, trajectory.expectations
    dyn = np.concatenate([[0.0], np.cumsum(0.5 * (e[:-1] + e[1:]) * np.diff(t))])
    return DressedTrajectory(t.copy(), trajectory.states * np.exp(1j * dyn)[:, None])


def pancharatnam_phase(state0, state1, threshold=ORTHOGONALITY_THRESHOLD) -> float:
    """arg<state0|state1> in (-pi, pi]."""
    return principal_arg(np.vdot(np.asarray(state0, dtype=complex), np.asarray(state1, dtype=complex)),
                         threshold, what="Pancharatnam overlap")


def oracle_geometric_phase(model: HamiltonianModel, schedule: ParameterPath, level, dt=None,
                           initial_phase=0.0) -> float:
    """Exact noncyclic geometric phase of the state started in ``level``.

    ``initial_phase`` rotates the initial vector by a constant; the result
    must not depend on it.
    """
    start = model.frame(schedule.points[0], level).vector * np.exp(1j * initial_phase)
    dressed = dress(propagate(model, schedule, start, dt=dt))
    return pancharatnam_phase(dressed.states[0], dressed.states[-1])


def parallel_transport_frames(frames, threshold=ORTHOGONALITY_THRESHOLD):
    """Rephase so each discrete connection increment arg<n_k|n_{k+1}> vanishes.

    Under this gauge the geometric phase is the bare endpoint overlap
    argument.
    """
    return phase_smooth(frames, threshold)


def trajectory_rows(trajectory: StateTrajectory, level=None, every=1):
    """Checkpoint rows: t, Re/Im amplitudes, norm, |<n(t)|psi(t)>|^2."""
    rows = []
    model, schedule = trajectory.model, trajectory.schedule
    for k in range(0, len(trajectory.times), every):
        t, psi = float(trajectory.times[k]), trajectory.states[k]
        row = {"t": t}
        for j, a in enumerate(psi):
            row[f"re{j}"] = float(a.real)
            row[f"im{j}"] = float(a.imag)
        row["norm"] = float(np.linalg.norm(psi))
        if level is not None:
            n = model.frame(schedule.at(t), level).vector
            row["population"] = float(abs(np.vdot(n, psi)) ** 2)
        rows.append(row)
    return rows

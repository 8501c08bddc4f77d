"""Spin-1/2 polarization experiment that exposes the noncyclic phase.

A spin prepared along +z sits in a field of fixed magnitude whose direction
e(t) is dragged slowly from e(0) = (sin Theta0, 0, cos Theta0) along a path
C. In the adiabatic limit

    P_z(t) = cos Th0 cos Th_t + sin Th0 sin Th_t cos(2 w_B t + 2 gamma[C] - 2 f)

with gamma_+ = -gamma_- = gamma[C] = f + 1/2 int cos Theta dPhi and f the
argument of the endpoint overlap <+;e(0)|+;e(t)>. The exact route
propagates the spin and reads <sigma_z> directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SchemaError, UndefinedPhaseError
from .geodesic import SpherePath
from .models import SIGMA_Z, SpinConfig, spin_model
from .oracle import propagate
from .paths import ParameterPath, smootherstep
from .util import ORTHOGONALITY_THRESHOLD, principal_arg, wrap


@dataclass(frozen=True)
class PolarizationResult:
    p_z_analytic: float
    p_z_oracle: Optional[float]
    f_value: float
    gamma: float
    p_z_printed: float
    p_z_measured: Optional[float] = None
    gamma_mod_pi_class: tuple = field(default_factory=tuple)

    def to_json(self, verbose=False) -> dict:
        out = {
            "p_z_analytic": self.p_z_analytic,
            "p_z_oracle": self.p_z_oracle,
            "f": self.f_value,
            "gamma": self.gamma,
            "gamma_mod_pi_class": list(self.gamma_mod_pi_class),
        }
        if self.p_z_measured is not None:
            out["p_z_measured"] = self.p_z_measured
        if verbose:
            out["p_z_printed_form"] = self.p_z_printed
        return out


def f_overlap(angles0, angles1, threshold=ORTHOGONALITY_THRESHOLD) -> float:
    """arg of <+;e(0)|+;e(t)> for field directions given as (Theta, Phi)."""
    th0, ph0 = angles0
    th1, ph1 = angles1
    d = ph1 - ph0
    z = (np.exp(-0.5j * d) * np.cos(th1 / 2) * np.cos(th0 / 2)
         + np.exp(0.5j * d) * np.sin(th1 / 2) * np.sin(th0 / 2))
    return principal_arg(z, threshold, what="spin endpoint overlap")


def spin_geometric_phase(path: SpherePath) -> float:
    """gamma[C] with gamma_+ = +gamma[C] and gamma_- = -gamma[C], wrapped.

    The azimuthal integral is the trapezoid rule on the path samples (the
    path stores a continuous azimuth).
    """
    f = f_overlap((path.theta[0], path.phi[0]), (path.theta[-1], path.phi[-1]))
    c = np.cos(path.theta)
    integral = 0.5 * np.sum((c[:-1] + c[1:]) * np.diff(path.phi))
    return wrap(f + 0.5 * integral)


def polarization_formula(theta0, theta_t, f, gamma, omega_B, t):
    """Adiabatic P_z with the cross-term sign that gives P_z(0) = 1."""
    return float(np.cos(theta0) * np.cos(theta_t)
                 + np.sin(theta0) * np.sin(theta_t) * np.cos(2 * omega_B * t + 2 * gamma - 2 * f))


def polarization_printed_form(theta0, theta_t, f, gamma, omega_B, t):
    """The same quantities substituted into the alternative sign arrangement
    cos Th0 cos Th_t - sin Th0 sin Th_t cos(2f + 2 w_B t + gamma_+ - gamma_-).

    Kept for comparison only; at t = 0 it gives cos(2 Theta0), not 1.
    """
    return float(np.cos(theta0) * np.cos(theta_t)
                 - np.sin(theta0) * np.sin(theta_t) * np.cos(2 * f + 2 * omega_B * t + 2 * gamma))


def gamma_mod_pi_candidates(p_z, theta0, theta_t, f, omega_B, t, tol=1e-12):
    """Values of gamma[C] mod pi compatible with a single P_z reading.

    cos(2 w t + 2 gamma - 2 f) is known, so 2 gamma is fixed up to the sign
    of the arccos and multiples of 2 pi: at most two classes in [0, pi).
    Returns () when sin Th0 sin Th_t vanishes and P_z carries no phase.
    """
    ss = np.sin(theta0) * np.sin(theta_t)
    if abs(ss) < tol:
        return ()
    x = np.clip((p_z - np.cos(theta0) * np.cos(theta_t)) / ss, -1.0, 1.0)
    a = np.arccos(x)
    out = sorted({round(float(np.mod((s * a - 2 * omega_B * t + 2 * f) / 2, np.pi)), 12) for s in (1, -1)})
    return tuple(0.0 if abs(v - np.pi) < 1e-12 else v for v in out)


def implied_argument(p_z, theta0, theta_t, near):
    """Cosine argument implied by a P_z reading, on the branch closest to ``near``."""
    ss = np.sin(theta0) * np.sin(theta_t)
    if abs(ss) < 1e-12:
        raise UndefinedPhaseError("sin Theta0 sin Theta_t = 0: P_z does not depend on the phase")
    a = np.arccos(np.clip((p_z - np.cos(theta0) * np.cos(theta_t)) / ss, -1.0, 1.0))
    cands = np.array([a, -a])
    cands = cands + 2 * np.pi * np.round((near - cands) / (2 * np.pi))
    return float(cands[np.argmin(np.abs(cands - near))])


def measured_polarization(i_plus, i_minus) -> float:
    """(1 - I-/I+) / (1 + I-/I+) from the two Stern-Gerlach sub-beam intensities."""
    if i_plus < 0 or i_minus < 0:
        raise SchemaError("intensities must be nonnegative")
    if i_plus == 0:
        raise ZeroDivisionError("I+ = 0: beam fully down-polarized, swap the sub-beam roles")
    r = i_minus / i_plus
    return (1.0 - r) / (1.0 + r)


def sphere_schedule(path: SpherePath, duration: float, samples_per_leg=400, corner_angle=0.2) -> ParameterPath:
    """Time-stamp a sphere path so the field comes to rest at every corner.

    The path is split into legs wherever its direction turns by more than
    ``corner_angle`` between consecutive segments; each leg gets time in
    proportion to its arc length and is traversed with a smootherstep
    profile, resampled at ``samples_per_leg`` points.
    """
    v = path.vectors
    seg = v[1:] - v[:-1]
    lengths = np.linalg.norm(seg, axis=1)
    keep = np.concatenate([[True], lengths > 1e-14])
    theta, phi, v = path.theta[keep], path.phi[keep], v[keep]
    if len(v) < 2:
        raise SchemaError("path does not move")
    seg = v[1:] - v[:-1]
    arc = 2 * np.arcsin(np.clip(np.linalg.norm(seg, axis=1) / 2, 0, 1))
    unit = seg / np.linalg.norm(seg, axis=1)[:, None]
    turn = np.arccos(np.clip(np.einsum("ij,ij->i", unit[:-1], unit[1:]), -1, 1))
    corners = np.concatenate([[0], 1 + np.flatnonzero(turn > corner_angle), [len(v) - 1]])
    s = np.concatenate([[0.0], np.cumsum(arc)])
    total = s[-1]
    u = np.linspace(0.0, 1.0, samples_per_leg + 1)
    times, th_out, ph_out, t0 = [np.zeros(1)], [theta[:1]], [phi[:1]], 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        T = duration * (s[b] - s[a]) / total
        target = s[a] + smootherstep(u[1:]) * (s[b] - s[a])
        times.append(t0 + T * u[1:])
        th_out.append(np.interp(target, s[a:b + 1], theta[a:b + 1]))
        ph_out.append(np.interp(target, s[a:b + 1], phi[a:b + 1]))
        t0 += T
    return ParameterPath(np.concatenate(times), np.column_stack([np.concatenate(th_out), np.concatenate(ph_out)]))


def oracle_polarization(path: SpherePath, omega_B: float, t: float, schedule=None, dt=None) -> float:
    """<sigma_z> after exact propagation from |+z> along the path in time t."""
    if t == 0 or len(path) < 2:
        return 1.0
    if schedule is None:
        schedule = sphere_schedule(path, t)
    else:
        schedule = schedule.scaled_to(t)
    traj = propagate(spin_model(SpinConfig(omega_B)), schedule, np.array([1.0, 0.0]), dt=dt)
    psi = traj.states[-1]
    return float(np.vdot(psi, SIGMA_Z @ psi).real)


def polarization_series(theta0: float, path: SpherePath, omega_B: float, duration: float, times,
                        dt=None, samples_per_leg=400):
    """P_z at several readout times during one traversal of ``path`` in ``duration``.

    The field follows :func:`sphere_schedule`; at each readout time the
    analytic value uses the part of the path traversed so far and the
    oracle value comes from a single propagation. Returns
    ``(p_z_analytic, p_z_oracle)`` arrays.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(times > duration):
        raise SchemaError("readout times must lie in [0, duration]")
    schedule = sphere_schedule(path, duration, samples_per_leg)
    traj = propagate(spin_model(SpinConfig(omega_B)), schedule, np.array([1.0, 0.0]), dt=dt)
    pz = np.abs(traj.states[:, 0]) ** 2 - np.abs(traj.states[:, 1]) ** 2
    oracle = np.interp(times, traj.times, pz)
    analytic = np.empty_like(times)
    for i, t in enumerate(times):
        k = np.searchsorted(schedule.times, t, side="right")
        pts = np.vstack([schedule.points[:k], schedule.at(t)[None, :]])
        part = SpherePath(pts[:, 0], pts[:, 1])
        f = f_overlap((theta0, 0.0), (part.theta[-1], part.phi[-1]))
        analytic[i] = polarization_formula(theta0, part.theta[-1], f, spin_geometric_phase(part), omega_B, t)
    return analytic, oracle


def polarization_z(theta0: float, path: SpherePath, omega_B: float, t: float, *, oracle=True,
                   schedule: Optional[ParameterPath] = None, shots: Optional[int] = None,
                   seed: Optional[int] = None, dt=None) -> PolarizationResult:
    """P_z(t) for the field path ``path`` starting at (theta0, Phi = 0).

    With ``shots`` the sub-beam intensities are drawn binomially (seeded)
    and the resulting measured polarization is reported as well.
    """
    SpinConfig(omega_B)
    if abs(path.theta[0] - theta0) > 1e-12 or abs(wrap(path.phi[0])) > 1e-12:
        raise SchemaError("path must start at (theta0, Phi = 0)")
    if t < 0:
        raise SchemaError(f"t must be nonnegative, got {t}")
    if t == 0:
        # nothing has been traversed yet: the field still points along e(0)
        path = SpherePath(path.theta[:1], path.phi[:1])
    theta_t, phi_t = path.theta[-1], path.phi[-1]
    f = f_overlap((theta0, path.phi[0]), (theta_t, phi_t))
    gamma = spin_geometric_phase(path)
    p_an = polarization_formula(theta0, theta_t, f, gamma, omega_B, t)
    p_pr = polarization_printed_form(theta0, theta_t, f, gamma, omega_B, t)
    p_or = oracle_polarization(path, omega_B, t, schedule, dt) if oracle else None
    reference = p_or if p_or is not None else p_an
    measured = None
    if shots:
        rng = np.random.default_rng(seed)
        n_up = int(rng.binomial(int(shots), np.clip((1 + reference) / 2, 0, 1)))
        measured = measured_polarization(n_up, int(shots) - n_up) if n_up else -1.0
    classes = gamma_mod_pi_candidates(reference, theta0, theta_t, f, omega_B, t)
    return PolarizationResult(p_an, p_or, f, gamma, p_pr, measured, classes)

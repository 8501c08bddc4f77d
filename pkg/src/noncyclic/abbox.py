"""Charged particle in an angular box carried around a flux line.

The box occupies the arc [Theta, Theta + delta_theta) of the circle and
its flux-free eigenfunction is the real sine mode
psi_n(u) = sqrt(2/delta_theta) sin(n pi u / delta_theta), u in [0, delta_theta].
With flux eta the single-valued eigenfunction picks up exp(i eta u) along
the box; where the box straddles theta = 0 the part past the cut carries an
extra exp(2 pi i eta).

The overlap with the initial box is

    <phi;0|phi;Theta> = exp(-i eta Theta) (exp(2 pi i eta) I_wrap + I_direct)

where I_direct = int_Theta^dtheta psi(x) psi(x - Theta) dx and
I_wrap = int_0^{Theta + dtheta - 2pi} psi(x) psi(x - Theta + 2pi) dx. The
vector potential contributes exactly +eta*Theta to the connection phase and
the real mode contributes nothing, so the geometric phase is
arg(exp(2 pi i eta) I_wrap + I_direct).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, SchemaError
from .util import ORTHOGONALITY_THRESHOLD, principal_arg, wrap

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class ABConfig:
    eta: float
    delta_theta: float = 1.5 * np.pi
    mode: int = 1
    quadrature_nodes: int = 4096

    def __post_init__(self):
        if not np.pi < self.delta_theta < TWO_PI:
            raise DomainError(f"box length must lie in (pi, 2pi), got {self.delta_theta}")
        if int(self.mode) != self.mode or self.mode < 1:
            raise DomainError(f"mode must be a positive integer, got {self.mode}")
        if self.quadrature_nodes < 3:
            raise DomainError("need at least three quadrature nodes")


@dataclass(frozen=True)
class BoxWavefunction:
    mode: int
    delta_theta: float
    offset: float = 0.0

    def local(self, u):
        """Mode as a function of the coordinate measured from the box start."""
        u = np.asarray(u, dtype=float)
        inside = (u >= 0) & (u <= self.delta_theta)
        val = np.sqrt(2.0 / self.delta_theta) * np.sin(self.mode * np.pi * u / self.delta_theta)
        return np.where(inside, val, 0.0)

    def __call__(self, theta):
        return self.local(np.mod(np.asarray(theta, dtype=float) - self.offset, TWO_PI))

    @property
    def support(self):
        return (self.offset, self.offset + self.delta_theta)


@dataclass(frozen=True)
class ABPhasePoint:
    theta: float
    gamma_wrapped: float
    gamma_unwrapped: float
    overlap_abs: float


def box_mode(config: ABConfig, offset: float = 0.0) -> BoxWavefunction:
    return BoxWavefunction(int(config.mode), float(config.delta_theta), float(offset))


def regime(config: ABConfig, Theta: float) -> str:
    """'a', 'b' or 'c' according to where the transported box sits."""
    if Theta <= TWO_PI - config.delta_theta:
        return "a"
    if Theta <= config.delta_theta:
        return "b"
    return "c"


def _integral(f, lo, hi, nodes):
    if hi <= lo:
        return 0.0
    x = np.linspace(lo, hi, nodes)
    return float(simpson(f(x), x=x))


def overlap_integrals(config: ABConfig, Theta: float):
    """(I_direct, I_wrap) for the box displaced by Theta in [0, 2pi]."""
    if not 0.0 <= Theta <= TWO_PI + 1e-12:
        raise SchemaError(f"Theta must lie in [0, 2pi], got {Theta}")
    psi = box_mode(config).local
    d, n = config.delta_theta, config.quadrature_nodes
    direct = _integral(lambda x: psi(x) * psi(x - Theta), Theta, d, n)
    wrapped = _integral(lambda x: psi(x) * psi(x - Theta + TWO_PI), 0.0, Theta + d - TWO_PI, n)
    return direct, wrapped


def ab_overlap(config: ABConfig, Theta: float) -> complex:
    """<phi_n; 0 | phi_n; Theta> including the flux phase factors."""
    direct, wrapped = overlap_integrals(config, Theta)
    eta = config.eta
    return complex(np.exp(-1j * eta * Theta) * (np.exp(2j * np.pi * eta) * wrapped + direct))


def ab_geometric_phase(config: ABConfig, thetas, threshold=ORTHOGONALITY_THRESHOLD):
    """Geometric phase along an increasing sweep of box positions starting at 0.

    Returns one :class:`ABPhasePoint` per Theta; the unwrapped column is the
    continuous accumulation of the wrapped phase along the sweep.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    if thetas.size == 0:
        return []
    if abs(thetas[0]) > 1e-12:
        raise SchemaError("the Theta sweep must start at 0")
    if np.any(np.diff(thetas) <= 0):
        raise SchemaError("the Theta sweep must be strictly increasing")
    wrapped, mags = [], []
    for Th in thetas:
        ov = ab_overlap(config, Th)
        wrapped.append(wrap(principal_arg(ov, threshold, what=f"box overlap at Theta={Th:.6g}")
                            + config.eta * Th))
        mags.append(abs(ov))
    unwrapped = np.unwrap(wrapped)
    return [ABPhasePoint(float(t), float(w), float(u), float(m))
            for t, w, u, m in zip(thetas, wrapped, unwrapped, mags)]


def ab_sweep(config: ABConfig, steps: int = 401):
    """Uniform sweep of Theta over [0, 2pi] in ``steps`` intervals."""
    return ab_geometric_phase(config, np.linspace(0.0, TWO_PI, steps + 1))

"""Branch conventions shared by every module.

Wrapped phases live in (-pi, pi]. The only comparison metric used anywhere
is the circular distance ``|wrap(a - b)|``.
"""
import numpy as np

from .errors import UndefinedPhaseError

ORTHOGONALITY_THRESHOLD = 1e-8


def wrap(x):
    """Map angles into (-pi, pi]."""
    w = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)
    w = np.where(w <= -np.pi, w + 2 * np.pi, w)
    return float(w) if w.ndim == 0 else w


def circular_distance(a, b):
    return np.abs(wrap(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def principal_arg(z, threshold=ORTHOGONALITY_THRESHOLD, what="overlap"):
    """Argument of ``z`` in (-pi, pi], refusing near-zero moduli."""
    z = complex(z)
    if abs(z) <= threshold:
        raise UndefinedPhaseError(f"{what} has modulus {abs(z):.3e} <= {threshold:g}; phase undefined")
    return wrap(np.angle(z))


def unwrap_defined(values):
    """Continuous accumulation of a wrapped sequence, skipping NaN entries."""
    values = np.asarray(values, dtype=float)
    out = np.full_like(values, np.nan)
    ok = ~np.isnan(values)
    if ok.any():
        out[ok] = np.unwrap(values[ok])
    return out

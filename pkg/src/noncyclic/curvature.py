"""Berry curvature in three-dimensional parameter spaces and its flux."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, MeshError, SchemaError
from .models import DEGENERACY_THRESHOLD, HamiltonianModel


@dataclass(frozen=True)
class CurvatureVector:
    components: np.ndarray
    point: np.ndarray


def berry_curvature(model: HamiltonianModel, point, level, threshold=DEGENERACY_THRESHOLD,
                    step=1e-5) -> CurvatureVector:
    """V_n(R) = Im sum_{m != n} <n|dH|m> x <m|dH|n> / (E_n - E_m)^2.

    Each term pairs <n|dH|m> with its own conjugate, so the eigenvector
    phases chosen by the eigensolver drop out.
    """
    point = np.asarray(point, dtype=float).ravel()
    if point.size != 3 or model.n_params != 3:
        raise SchemaError("curvature needs a three-dimensional parameter space")
    n = model.level(level)
    E, U = np.linalg.eigh(model.hamiltonian(point))
    dE = E[n] - E
    dE[n] = np.inf
    if np.min(np.abs(dE)) < threshold:
        raise DegeneracyError(f"gap {np.min(np.abs(dE)):.3e} below threshold at R={point}")
    dH = model.dH(point, step)
    # X[j, m] = <n|d_j H|m>
    X = np.einsum("a,jab,bm->jm", U[:, n].conj(), dH, U)
    V = np.zeros(3)
    for m in range(len(E)):
        if m == n:
            continue
        a, b = X[:, m], X[:, m].conj()
        V += np.imag(np.cross(a, b)) / dE[m] ** 2
    return CurvatureVector(V, point)


def curvature_flux(model: HamiltonianModel, vertices, triangles, level, **kw) -> float:
    """-sum over triangles of area * (V(centroid) . unit normal).

    Triangle orientation (vertex order, right-hand rule) sets the normal.
    """
    triangles = np.asarray(triangles, dtype=int).reshape(-1, 3)
    if triangles.size == 0:
        return 0.0
    vertices = np.asarray(vertices, dtype=float)
    if np.any(triangles[:, 0] == triangles[:, 1]) or np.any(triangles[:, 1] == triangles[:, 2]) \
            or np.any(triangles[:, 0] == triangles[:, 2]):
        raise MeshError("mesh contains triangles with repeated vertices")
    a, b, c = (vertices[triangles[:, i]] for i in range(3))
    area_normals = 0.5 * np.cross(b - a, c - a)
    centroids = (a + b + c) / 3.0
    total = 0.0
    for centroid, s in zip(centroids, area_normals):
        if not np.any(s):
            continue
        total += berry_curvature(model, centroid, level, **kw).components @ s
    return float(-total)


def cap_mesh(theta_max, n_boundary, n_rings, radius=1.0, surface="flat"):
    """Triangulated surface spanning the circle of latitude ``theta_max``.

    ``surface="flat"`` fills the rim with the planar disk at height
    ``radius*cos(theta_max)``; ``"sphere"`` puts every vertex on the sphere.
    For a divergence-free curvature field both carry the same exact flux,
    but flat facets avoid the sagitta error of chords across a curved cap.
    Ring k (k = 1..n_rings) carries ~n_boundary*k/n_rings points; the rim
    is exactly ``n_boundary`` points at azimuths 2*pi*j/n_boundary. Normals
    point away from the origin. Returns ``(vertices, triangles, rim_indices)``.
    """
    if n_rings < 1 or n_boundary < 3:
        raise MeshError("cap mesh needs at least one ring and three boundary points")
    if surface not in ("flat", "sphere"):
        raise SchemaError(f"unknown cap surface {surface!r}")
    z_rim = np.cos(theta_max)
    centre = [0.0, 0.0, radius * (z_rim if surface == "flat" else 1.0)]
    verts = [np.array(centre)]
    rings = [np.array([0])]
    for k in range(1, n_rings + 1):
        m = n_boundary if k == n_rings else max(3, int(round(n_boundary * k / n_rings)))
        ph = 2 * np.pi * np.arange(m) / m
        if surface == "flat":
            rho, z = np.sin(theta_max) * k / n_rings, z_rim
        else:
            th = theta_max * k / n_rings
            rho, z = np.sin(th), np.cos(th)
        start = len(verts)
        verts.extend(radius * np.column_stack([rho * np.cos(ph), rho * np.sin(ph), np.full(m, z)]))
        rings.append(start + np.arange(m))
    tris = []
    for inner, outer in zip(rings[:-1], rings[1:]):
        tris.extend(_zip_rings(inner, outer))
    return np.array(verts), np.array(tris, dtype=int), rings[-1]


def _zip_rings(inner, outer):
    """Triangulate the band between two rings, both ordered by increasing azimuth."""
    ni, no = len(inner), len(outer)
    if ni == 1:
        return [(inner[0], outer[j], outer[(j + 1) % no]) for j in range(no)]
    tris = []
    i = j = 0
    while i < ni or j < no:
        # advance along whichever ring's next vertex comes first in azimuth
        if j < no and (i >= ni or (j + 1) / no <= (i + 1) / ni):
            tris.append((inner[i % ni], outer[j], outer[(j + 1) % no]))
            j += 1
        else:
            tris.append((inner[i % ni], outer[j % no], inner[(i + 1) % ni]))
            i += 1
    return tris


def triangle_mesh(a, b, c, n):
    """Planar triangle a, b, c split into n^2 congruent pieces, same orientation.

    Seen from the origin a flat triangle subtends the same solid angle as the
    geodesic triangle on its corners, so this meshes octant-type caps.
    """
    if n < 1:
        raise MeshError("need at least one subdivision")
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    index, verts = {}, []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            index[i, j] = len(verts)
            verts.append(a + (b - a) * i / n + (c - a) * j / n)
    tris = []
    for i in range(n):
        for j in range(n - i):
            tris.append((index[i, j], index[i + 1, j], index[i, j + 1]))
            if i + j < n - 1:
                tris.append((index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]))
    return np.array(verts), np.array(tris, dtype=int)

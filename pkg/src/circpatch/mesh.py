"""Disk tessellation and surface sampling.

The tessellation is a fan of concentric rings: ring l (1..rings) sits at
radius l/rings and carries n*per_side*l evenly spaced vertices, all rings
starting at the first side corner so the n corners are exact rim
vertices.  Adjacent rings are stitched with an angle-merge zipper, which
keeps every triangle counterclockwise and the band watertight.

Surface normals come from central finite differences of the patch in
(u, v); within a step of the rim the exiting side collapses to a one-sided
difference.  Per-vertex work is independent and may be parallelized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import TWO_PI, DomainConfig
from .param import RIM_TOL, BisectionSettings
from .patch import ControlNet, evaluate_batch

# Cross products shorter than this mark a degenerate normal.
DEGENERATE_NORMAL = 1e-12


@dataclass(frozen=True)
class DomainMesh:
    """Triangulated disk: vertices (V, 2), triangles (F, 3) CCW,
    boundary_flags (V,) holding the side index of rim vertices (corners go
    to the counterclockwise side) and 0 for interior vertices."""

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_flags: np.ndarray


@dataclass(frozen=True)
class SurfaceMesh:
    """Sampled surface: positions/normals (V, 3), triangles shared with the
    domain mesh, optional per-vertex scalar, per-vertex degeneracy flags."""

    positions: np.ndarray
    normals: np.ndarray
    triangles: np.ndarray
    scalar: np.ndarray | None = None
    degenerate: np.ndarray | None = None


def _zip_rings(inner: np.ndarray, outer: np.ndarray) -> list[tuple[int, int, int]]:
    """Stitch two vertex-index rings (sorted by angle, same start angle)."""
    a, b = len(inner), len(outer)
    tris = []
    i = j = 0
    while i < a or j < b:
        take_inner = i < a and (j >= b or (i + 1) * b <= (j + 1) * a)
        if take_inner:
            tris.append((inner[i % a], outer[j % b], inner[(i + 1) % a]))
            i += 1
        else:
            tris.append((inner[i % a], outer[j % b], outer[(j + 1) % b]))
            j += 1
    return tris


def tessellate_disk(cfg: DomainConfig, rings: int, per_side: int = 8) -> DomainMesh:
    """Concentric-ring triangulation of the unit disk.

    Ring l holds n*per_side*l vertices at radius l/rings; the rim therefore
    has per_side*rings vertices per side and every side corner is a rim
    vertex.  Vertex count is 1 + k*rings*(rings+1)/2 and triangle count
    k*rings^2 with k = n*per_side.
    """
    if rings < 1:
        raise ValueError("rings must be >= 1")
    if per_side < 1:
        raise ValueError("per_side must be >= 1")
    n = cfg.n
    k = n * per_side
    offset = math.pi / n  # first corner; all rings share it

    verts = [(0.0, 0.0)]
    flags = [0]
    ring_index: list[np.ndarray] = []
    for ell in range(1, rings + 1):
        count = k * ell
        start = len(verts)
        ang = offset + np.arange(count) * (TWO_PI / count)
        radius = ell / rings
        verts.extend(zip(radius * np.cos(ang), radius * np.sin(ang)))
        ring_index.append(np.arange(start, start + count))
        if ell == rings:
            # corner t*per_side*rings starts side t+2 (ccw); integer math only
            sides = (np.arange(count) // (per_side * rings) + 1) % n + 1
            flags.extend(sides.tolist())
        else:
            flags.extend([0] * count)

    tris = [(0, ring_index[0][t], ring_index[0][(t + 1) % k]) for t in range(k)]
    for ell in range(rings - 1):
        tris.extend(_zip_rings(ring_index[ell], ring_index[ell + 1]))

    return DomainMesh(
        np.asarray(verts),
        np.asarray(tris, dtype=np.int64),
        np.asarray(flags, dtype=np.int64),
    )


_FD_DIRS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


def finite_difference_normals(net: ControlNet, points: np.ndarray,
                              settings: BisectionSettings | None = None,
                              step: float = 1e-5):
    """Unit normals of the patch at domain points (N, 2).

    Returns (normals (N, 3), degenerate (N,) bool).  Degenerate vertices
    keep a placeholder +z normal; callers decide how to patch them.
    """
    pts = np.asarray(points, dtype=float)
    offs = pts[:, None, :] + step * _FD_DIRS
    valid = np.hypot(offs[..., 0], offs[..., 1]) <= 1.0 + RIM_TOL
    eval_pts = np.where(valid[..., None], offs, pts[:, None, :])
    flat, _ = evaluate_batch(net, eval_pts.reshape(-1, 2), settings)
    samples = flat.reshape(len(pts), 4, 3)

    partials = []
    for axis, (plus, minus) in enumerate(((0, 1), (2, 3))):
        den = eval_pts[:, plus, axis] - eval_pts[:, minus, axis]
        if np.any(den == 0.0):
            raise ValueError("finite-difference step leaves the disk on both sides")
        partials.append((samples[:, plus] - samples[:, minus]) / den[:, None])
    cross = np.cross(partials[0], partials[1])
    length = np.linalg.norm(cross, axis=1)
    degenerate = length < DEGENERATE_NORMAL
    safe = np.where(degenerate, 1.0, length)
    normals = cross / safe[:, None]
    normals[degenerate] = (0.0, 0.0, 1.0)
    return normals, degenerate


def sample_surface(net: ControlNet, dm: DomainMesh,
                   settings: BisectionSettings | None = None,
                   normal_step: float = 1e-5) -> SurfaceMesh:
    """Evaluate the patch at every mesh vertex.

    Degenerate normals (cross product below ``DEGENERATE_NORMAL``) are
    flagged and copied from the nearest non-degenerate vertex when one
    exists.
    """
    positions, _ = evaluate_batch(net, dm.vertices, settings)
    normals, degenerate = finite_difference_normals(net, dm.vertices, settings, normal_step)

    if np.any(degenerate) and not np.all(degenerate):
        good = np.flatnonzero(~degenerate)
        good_pts = dm.vertices[good]
        for bad in np.flatnonzero(degenerate):
            d2 = np.sum((good_pts - dm.vertices[bad]) ** 2, axis=1)
            normals[bad] = normals[good[int(np.argmin(d2))]]

    return SurfaceMesh(positions, normals, dm.triangles, None, degenerate)


def isophote_scalar(sm: SurfaceMesh, light) -> np.ndarray:
    """Per-vertex cosine between the surface normal and a light direction."""
    ell = np.asarray(light, dtype=float)
    norm = np.linalg.norm(ell)
    if norm < 1e-12:
        raise ValueError("light vector must be nonzero")
    return np.clip(sm.normals @ (ell / norm), -1.0, 1.0)

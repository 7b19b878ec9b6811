"""Unit-circle domain geometry for n-sided patches.

The domain is the closed unit disk.  Its rim is divided into n equal arcs
("sides"), numbered 1..n counterclockwise; side 1 is the canonical base
arc spanning the angles [-pi/n, pi/n].  For a height value h in [0, 1]
the constant-parameter level set is a circular arc that meets the domain
circle at the angle h*pi.  Two heights are special:

* h = 1/(n-2) (``h_hat``): the arc straightens into the vertical chord
  u = cos(pi/(n-2)) (``u_hat``);
* h = 0 and h = 1: the arc lies on the domain circle itself.

All functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# |h - h_hat| at or below this collapses the level arc to the straight chord;
# beyond it the arc radius stays below ~1e12 and the Arc variant is usable.
LINE_SNAP = 1e-12


@dataclass(frozen=True)
class DomainConfig:
    """Side count n plus the derived layout constants of the disk domain."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 3:
            raise ValueError(f"side count must be an integer >= 3, got {self.n!r}")

    @property
    def h_hat(self) -> float:
        """Height whose level set is a straight chord: 1/(n-2)."""
        return 1.0 / (self.n - 2)

    @property
    def u_hat(self) -> float:
        """Abscissa of the straight level set: cos(pi/(n-2)); -1 for n=3."""
        return math.cos(math.pi / (self.n - 2))

    def side_arc(self, i: int) -> tuple[float, float]:
        """Angle interval [start, end] of side i, counterclockwise."""
        self._check_side(i)
        step = TWO_PI / self.n
        start = -math.pi / self.n + (i - 1) * step
        return start, start + step

    def corner_angle(self, i: int) -> float:
        """Angle of the corner shared by sides i and i+1 (wrapping at n)."""
        self._check_side(i)
        return (2 * i - 1) * math.pi / self.n

    def _check_side(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValueError(f"side index {i} out of range 1..{self.n}")


@dataclass(frozen=True)
class Arc:
    """Circular level set: center on the u-axis, endpoints on the rim.

    ``phi`` is the rim angle of the endpoints, ``theta`` the angle at which
    the arc meets the domain circle, and ``psi = theta - phi`` the (signed)
    half-geometry angle whose sine scales center and radius.
    """

    center: tuple[float, float]
    radius: float
    p1: tuple[float, float]
    p2: tuple[float, float]
    phi: float
    theta: float
    psi: float


@dataclass(frozen=True)
class Line:
    """Straight level set: the vertical chord u = abscissa."""

    abscissa: float


@dataclass(frozen=True)
class BoundaryArc:
    """Level set lying on the domain circle itself (h = 0 or h = 1)."""

    h: float


LevelSet = Arc | Line | BoundaryArc


def normalize_angle(a: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def rotate_points(points, angle: float) -> np.ndarray:
    """Rotate one point (2,) or a batch (N, 2) about the origin."""
    c, s = math.cos(angle), math.sin(angle)
    pts = np.asarray(points, dtype=float)
    return pts @ np.array([[c, s], [-s, c]])


def side_corners(cfg: DomainConfig, i: int):
    """Rim corner points bounding side i, in counterclockwise order."""
    lo, hi = cfg.side_arc(i)
    return (
        (math.cos(lo), math.sin(lo)),
        (math.cos(hi), math.sin(hi)),
    )


def to_canonical(cfg: DomainConfig, i: int, p) -> np.ndarray:
    """Rotate p by -2*pi*(i-1)/n so side i lands on the base arc.

    Accepts a single point (2,) or a batch (N, 2); norm is preserved.
    """
    cfg._check_side(i)
    return rotate_points(p, -TWO_PI * (i - 1) / cfg.n)


def from_canonical(cfg: DomainConfig, i: int, p) -> np.ndarray:
    """Inverse of :func:`to_canonical`."""
    cfg._check_side(i)
    return rotate_points(p, TWO_PI * (i - 1) / cfg.n)


def _check_height(h: float) -> None:
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"height must lie in [0, 1], got {h!r}")


def endpoint_angle(cfg: DomainConfig, h: float) -> float:
    """Rim angle phi = (2h+1)*pi/n of the level-set endpoints."""
    _check_height(h)
    return normalize_angle((2.0 * h + 1.0) * math.pi / cfg.n)


def arc_endpoints(cfg: DomainConfig, h: float):
    """Level-set endpoints p1 = (cos phi, sin phi), p2 = (cos phi, -sin phi).

    They sweep the two sides adjacent to the base side uniformly as h runs
    from 0 to 1.
    """
    phi = endpoint_angle(cfg, h)
    c, s = math.cos(phi), math.sin(phi)
    return (c, s), (c, -s)


def level_set(cfg: DomainConfig, h: float) -> LevelSet:
    """Geometry of the constant-parameter line for height h.

    Returns
    -------
    Arc
        For generic h: center (sin theta / sin psi, 0) on the u-axis and
        radius |sin phi / sin psi|, with theta = h*pi.
    Line
        For h within ``LINE_SNAP`` of h_hat = 1/(n-2) (n >= 4 only): the
        chord u = u_hat.
    BoundaryArc
        For h = 0 or h = 1, where the level set lies on the domain circle.
        For n = 3 the h = 1 level set degenerates to the single point
        (-1, 0); it is reported as BoundaryArc and callers must treat it
        as that corner point.
    """
    _check_height(h)
    if h == 0.0 or h == 1.0:
        return BoundaryArc(h)
    if cfg.n > 3 and abs(h - cfg.h_hat) <= LINE_SNAP:
        return Line(cfg.u_hat)

    phi = endpoint_angle(cfg, h)
    theta = normalize_angle(h * math.pi)
    psi = normalize_angle(theta - phi)
    sin_psi = math.sin(psi)
    center = (math.sin(theta) / sin_psi, 0.0)
    radius = abs(math.sin(phi) / sin_psi)
    p1, p2 = arc_endpoints(cfg, h)
    return Arc(center, radius, p1, p2, phi, theta, psi)


def level_set_points(cfg: DomainConfig, h: float, count: int) -> np.ndarray:
    """Sample `count` points along the level set, from p2 up to p1.

    The traversal stays inside the closed disk (it crosses the u-axis at
    the interior intersection of the level circle, never the exterior one).
    """
    if count < 2:
        raise ValueError("count must be >= 2")
    ls = level_set(cfg, h)
    t = np.linspace(0.0, 1.0, count)

    if isinstance(ls, Line):
        half = math.sin(math.pi / (cfg.n - 2))
        v = -half + 2.0 * half * t
        return np.column_stack([np.full(count, ls.abscissa), v])

    if isinstance(ls, BoundaryArc):
        phi = endpoint_angle(cfg, h)
        if ls.h == 0.0:
            beta = -phi + 2.0 * phi * t
        else:
            # far rim portion: sweep clockwise from -phi through pi to +phi
            beta = -phi - (TWO_PI - 2.0 * phi) * t
        return np.column_stack([np.cos(beta), np.sin(beta)])

    ox = ls.center[0]
    a1 = math.atan2(ls.p1[1], ls.p1[0] - ox)
    if ls.psi < 0.0:
        beta = -a1 + 2.0 * a1 * t
    else:
        beta = -a1 - (TWO_PI - 2.0 * a1) * t
    return np.column_stack(
        [ox + ls.radius * np.cos(beta), ls.radius * np.sin(beta)]
    )


def _traversal_tangent(ls: Arc, q) -> tuple[float, float]:
    """Unit tangent of the level arc at a point q on it, oriented along the
    in-disk traversal from p2 toward p1."""
    ru = q[0] - ls.center[0]
    rv = q[1] - ls.center[1]
    if ls.psi < 0.0:  # arc runs counterclockwise about its center
        du, dv = -rv, ru
    else:
        du, dv = rv, -ru
    scale = math.hypot(du, dv)
    return du / scale, dv / scale


def level_end_tangent(cfg: DomainConfig, h: float, endpoint: int):
    """Rim endpoint of the level set and the level-curve tangent there.

    ``endpoint`` selects p1 (+1, upper) or p2 (-1, lower).  The tangent is
    oriented along the traversal from p2 toward p1.  BoundaryArc level sets
    (h = 0 or 1) are rejected.
    """
    if endpoint not in (1, -1):
        raise ValueError("endpoint must be +1 (p1) or -1 (p2)")
    ls = level_set(cfg, h)
    if isinstance(ls, BoundaryArc):
        raise ValueError(f"level set for h={h} lies on the domain circle")
    p1, p2 = arc_endpoints(cfg, h)
    q = p1 if endpoint == 1 else p2
    if isinstance(ls, Line):
        return np.asarray(q), np.array([0.0, 1.0])
    return np.asarray(q), np.asarray(_traversal_tangent(ls, q))


def tangency_angle(cfg: DomainConfig, h: float) -> float:
    """Angle at p2 between the rim tangent and the level-arc tangent.

    Both tangents are oriented along the traversal from p2 toward p1: the
    rim tangent counterclockwise through (1, 0), the arc tangent along the
    in-disk branch of the level circle.  The result lies in [0, pi] and
    equals h*pi for the arcs produced by :func:`level_set`.
    """
    _check_height(h)
    if not 0.0 < h < 1.0:
        raise ValueError("tangency angle requires 0 < h < 1")
    ls = level_set(cfg, h)
    if not isinstance(ls, Arc):
        raise ValueError(f"level set for h={h} is degenerate ({type(ls).__name__})")

    tu, tv = math.sin(ls.phi), math.cos(ls.phi)
    du, dv = _traversal_tangent(ls, ls.p2)
    cross = tu * dv - tv * du
    dot = tu * du + tv * dv
    return math.atan2(abs(cross), dot)

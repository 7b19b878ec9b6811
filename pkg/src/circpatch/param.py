"""Height mapping over the circular domain.

A point p = (u, v) in the disk is assigned the height h whose level arc
passes through it.  There is no closed form, so the value is found by
bisection on the deviation

    Delta(h) = ||p - O(h)|| - r(h),

where O and r are the level-arc center and radius.  The search interval
is split at the straight level set: points right of the chord u = u_hat
bisect on [0, h_hat - eps], points left of it on [h_hat + eps, 1], and
points on the chord map to h_hat directly.

Deviation signs are fixed by the geometry: on the right branch Delta is
<= 0 at h = 0 (the h = 0 level circle is the domain circle itself) and
> 0 at h_hat - eps; the left branch mirrors this.  The bisection below
relies only on those interior signs, so rim points, whose deviation
vanishes at the far interval end, converge to the correct height instead
of latching onto the spurious endpoint zero.

Points on the rim itself bypass the search: there the mapping is the
uniform angular sweep (0 on the base arc, (|angle|*n/pi - 1)/2 across the
adjacent arcs, 1 beyond), which is exact.  Bisection cannot deliver that
at the corners, where the deviation root turns tangential and sign
decisions drown in roundoff at the ~1e-8 level.

Everything here is a pure function; batch variants evaluate many points
per bisection sweep and callers may parallelize freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import DomainConfig, to_canonical

# |u - u_hat| at or below this short-circuits to h = h_hat.
U_HAT_TOL = 1e-9
# Points outside the unit circle by at most this are radially projected
# back onto it (tessellation emits rim vertices at machine precision).
RIM_TOL = 1e-9
# Points within this of the rim from inside take the exact rim values too;
# kept near machine precision so that barely-interior points, whose height
# differs measurably from the rim value near the corners, still bisect.
_RIM_INNER = 1e-14
# deviation() rejects heights this close to h_hat; the level circle is
# too large there for the norm-minus-radius form to stay conditioned.
DEGENERATE_BAND = 1e-9
# Endpoint deviations within this of zero still count as a valid bracket.
_BRACKET_ZERO = 1e-12


class DomainError(ValueError):
    """Point lies outside the closed unit disk beyond the rim tolerance."""


class BracketError(ArithmeticError):
    """The deviation has no sign change over the bisection interval.

    Unreachable for in-disk points; raised loudly because it signals a
    geometry or numerics defect rather than a property of the input.
    """


@dataclass(frozen=True)
class BisectionSettings:
    """Tunables of the height search.

    ``epsilon_gap`` is the half-width of the exclusion band around h_hat
    (the deviation is ill-conditioned there), ``tolerance`` the interval
    width at which bisection stops, ``max_iterations`` a hard cap.
    """

    epsilon_gap: float = 1e-7
    tolerance: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if self.epsilon_gap <= 0.0:
            raise ValueError("epsilon_gap must be positive")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        need = math.ceil(math.log2(1.0 / self.tolerance))
        if self.max_iterations < need:
            raise ValueError(
                f"max_iterations={self.max_iterations} cannot reach "
                f"tolerance={self.tolerance} (needs >= {need})"
            )

    def check_for(self, cfg: DomainConfig) -> None:
        """Reject an epsilon_gap that swallows one of the two intervals."""
        h_hat = cfg.h_hat
        limit = h_hat if cfg.n == 3 else min(h_hat, 1.0 - h_hat)
        if not self.epsilon_gap < limit:
            raise ValueError(
                f"epsilon_gap={self.epsilon_gap} too large for n={cfg.n}"
            )


DEFAULT_SETTINGS = BisectionSettings()


def _delta_arrays(cfg: DomainConfig, u, v, h):
    """Vectorized deviation ||p - O(h)|| - r(h); h away from h_hat."""
    phi = (2.0 * h + 1.0) * (math.pi / cfg.n)
    psi = h * math.pi - phi
    sin_psi = np.sin(psi)
    ox = np.sin(h * math.pi) / sin_psi
    r = np.abs(np.sin(phi) / sin_psi)
    return np.hypot(u - ox, v) - r


def deviation(cfg: DomainConfig, p, h: float) -> float:
    """Signed distance of p to the level circle for height h.

    Zero exactly when p lies on the level arc.  Heights within
    ``DEGENERATE_BAND`` of h_hat are rejected; test u against u_hat
    instead of the deviation there.
    """
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"height must lie in [0, 1], got {h!r}")
    if abs(h - cfg.h_hat) < DEGENERATE_BAND:
        raise ValueError(
            f"h={h} is inside the degenerate band around h_hat={cfg.h_hat}; "
            "compare u with u_hat instead"
        )
    u, v = _project_point(p)
    return float(_delta_arrays(cfg, u, v, h))


def _project_point(p) -> tuple[float, float]:
    pt = np.asarray(p, dtype=float)
    if pt.shape != (2,):
        raise ValueError(f"expected a 2D point, got shape {pt.shape}")
    u, v = float(pt[0]), float(pt[1])
    norm = math.hypot(u, v)
    if norm > 1.0 + RIM_TOL:
        raise DomainError(f"point ({u}, {v}) lies outside the unit disk")
    if norm > 1.0:
        u, v = u / norm, v / norm
    return u, v


def _no_sign_change(dlo, dhi):
    pos = (dlo > _BRACKET_ZERO) & (dhi > _BRACKET_ZERO)
    neg = (dlo < -_BRACKET_ZERO) & (dhi < -_BRACKET_ZERO)
    return pos | neg


def height_batch(cfg: DomainConfig, points, settings: BisectionSettings | None = None) -> np.ndarray:
    """Heights of a batch of points (N, 2) given in canonical position.

    Returns an array of shape (N,).  Raises :class:`DomainError` for
    points outside the disk and :class:`BracketError` when the deviation
    fails to bracket a root even after widening the interval toward
    h_hat -+ epsilon_gap/2 once.
    """
    settings = settings or DEFAULT_SETTINGS
    settings.check_for(cfg)

    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected points of shape (N, 2), got {pts.shape}")
    u = pts[:, 0]
    v = pts[:, 1]
    norm = np.hypot(u, v)
    if np.any(norm > 1.0 + RIM_TOL):
        worst = int(np.argmax(norm))
        raise DomainError(
            f"point ({pts[worst, 0]}, {pts[worst, 1]}) lies outside the unit disk"
        )

    h_hat = cfg.h_hat
    eps = settings.epsilon_gap
    out = np.full(u.shape, h_hat)

    # exact values on the rim: the boundary sweep is uniform in angle
    rim = (norm > 1.0) | (np.abs(norm - 1.0) <= _RIM_INNER)
    if np.any(rim):
        a = np.abs(np.arctan2(v[rim], u[rim]))
        out[rim] = np.clip(0.5 * (a * cfg.n / math.pi - 1.0), 0.0, 1.0)

    solve = ~rim & (np.abs(u - cfg.u_hat) > U_HAT_TOL)
    if not np.any(solve):
        return out

    us, vs = u[solve], v[solve]
    right = us > cfg.u_hat  # true h < h_hat
    lo = np.where(right, 0.0, h_hat + eps)
    hi = np.where(right, h_hat - eps, 1.0)
    # sign of the deviation on the h_hat side of the interval
    sigma = np.where(right, 1.0, -1.0)

    dlo = _delta_arrays(cfg, us, vs, lo)
    dhi = _delta_arrays(cfg, us, vs, hi)
    bad = _no_sign_change(dlo, dhi)
    if np.any(bad):
        # widen once toward the gap, then give up loudly
        hi = np.where(bad & right, h_hat - 0.5 * eps, hi)
        lo = np.where(bad & ~right, h_hat + 0.5 * eps, lo)
        dlo = _delta_arrays(cfg, us, vs, lo)
        dhi = _delta_arrays(cfg, us, vs, hi)
        still = _no_sign_change(dlo, dhi)
        if np.any(still):
            first = int(np.argmax(still))
            raise BracketError(
                f"no deviation sign change for {int(np.sum(still))} point(s); "
                f"first at ({us[first]}, {vs[first]}), n={cfg.n}"
            )

    for _ in range(settings.max_iterations):
        active = hi - lo > settings.tolerance
        if not np.any(active):
            break
        # freeze converged entries so each point's trajectory is independent
        # of the batch it rides in (scalar and batch results stay identical)
        mid = 0.5 * (lo + hi)
        positive = sigma * _delta_arrays(cfg, us, vs, mid) > 0.0
        hi = np.where(active & positive, mid, hi)
        lo = np.where(active & ~positive, mid, lo)

    out[solve] = 0.5 * (lo + hi)
    return out


def height(cfg: DomainConfig, p, settings: BisectionSettings | None = None) -> float:
    """Height of a single point given in canonical position."""
    pt = np.asarray(p, dtype=float)
    if pt.shape != (2,):
        raise ValueError(f"expected a 2D point, got shape {pt.shape}")
    return float(height_batch(cfg, pt[None, :], settings)[0])


def height_for_side(cfg: DomainConfig, i: int, p, settings: BisectionSettings | None = None) -> float:
    """Height h_i of p: rotate side i onto the base arc, then map."""
    return height(cfg, to_canonical(cfg, i, p), settings)


def height_for_side_batch(cfg: DomainConfig, i: int, points, settings: BisectionSettings | None = None) -> np.ndarray:
    """Batch variant of :func:`height_for_side` for points (N, 2)."""
    return height_batch(cfg, to_canonical(cfg, i, points), settings)


def height_field(cfg: DomainConfig, p, settings: BisectionSettings | None = None) -> np.ndarray:
    """All n heights h_1..h_n of p as an array (entry i-1 holds h_i)."""
    return height_field_batch(cfg, np.asarray(p, dtype=float)[None, :], settings)[0]


def height_field_batch(cfg: DomainConfig, points, settings: BisectionSettings | None = None) -> np.ndarray:
    """Height fields of a batch (N, 2); returns shape (N, n)."""
    pts = np.asarray(points, dtype=float)
    cols = []
    for i in range(1, cfg.n + 1):
        try:
            cols.append(height_for_side_batch(cfg, i, pts, settings))
        except BracketError as exc:
            raise BracketError(f"side {i}: {exc}") from exc
    return np.column_stack(cols)


def corner_pair(cfg: DomainConfig, i: int, p, settings: BisectionSettings | None = None) -> tuple[float, float]:
    """The pair (h_{i+1}(p), h_i(p)) consumed by the corner-i interpolant."""
    cfg._check_side(i)
    nxt = i % cfg.n + 1
    return (
        height_for_side(cfg, nxt, p, settings),
        height_for_side(cfg, i, p, settings),
    )


def gradient(cfg: DomainConfig, i: int, p, settings: BisectionSettings | None = None,
             fd_step: float = 1e-6) -> np.ndarray:
    """Finite-difference gradient of h_i at p.

    Central differences, falling back to one-sided within ``fd_step`` of
    the rim (at most one side of each axis can leave the disk there).
    """
    if fd_step <= 0.0:
        raise ValueError("fd_step must be positive")
    u, v = _project_point(p)
    base = np.array([u, v])
    offsets = base + fd_step * np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    valid = np.hypot(offsets[:, 0], offsets[:, 1]) <= 1.0 + RIM_TOL
    eval_pts = np.where(valid[:, None], offsets, base)
    values = height_for_side_batch(cfg, i, eval_pts, settings)
    grad = np.empty(2)
    for axis, (plus, minus) in enumerate(((0, 1), (2, 3))):
        den = eval_pts[plus, axis] - eval_pts[minus, axis]
        if den == 0.0:
            raise DomainError(
                f"cannot take a finite difference at ({u}, {v}); "
                f"both axis-{axis} offsets leave the disk"
            )
        grad[axis] = (values[plus] - values[minus]) / den
    return grad

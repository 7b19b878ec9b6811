"""OGB surface evaluation: corner-based n-sided patches on the disk.

A control net holds one (m+1) x (m+1) block of 3D points per corner,
m = floor(d/2), plus a central point.  Corner i sits between sides i and
i+1; within its block the j index runs along side i and the k index along
side i+1.  The surface value at a domain point with heights h_1..h_n is

    S = sum_i sum_j sum_k P[i,j,k] * B_j^d(h_{i+1}) * B_k^d(h_i) + P_0 * B_0

with degree-d Bernstein weights and the deficiency B_0 = 1 minus the sum
of all corner weights.  The degree must be odd: the half blocks then tile
each boundary curve exactly and B_0 vanishes on the rim.

Nets are immutable after construction; evaluation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import DomainConfig
from .param import BisectionSettings, height_field_batch


def bernstein(degree: int, j: int, t: float) -> float:
    """Degree-d Bernstein weight C(d,j) * t^j * (1-t)^(d-j)."""
    if not 0 <= j <= degree:
        raise ValueError(f"index {j} out of range 0..{degree}")
    return math.comb(degree, j) * t**j * (1.0 - t) ** (degree - j)


def _half_rows(degree: int, t) -> np.ndarray:
    """Bernstein weights B_j^d(t) for j = 0..floor(d/2), batched over t."""
    t = np.asarray(t, dtype=float)
    js = np.arange(degree // 2 + 1)
    coef = np.array([math.comb(degree, j) for j in js], dtype=float)
    return coef * t[..., None] ** js * (1.0 - t[..., None]) ** (degree - js)


@dataclass(frozen=True)
class ControlNet:
    """n-sided degree-d control structure: center P_0 plus corner blocks.

    ``points`` has shape (n, m+1, m+1, 3) with m = degree // 2, stored in
    lexicographic (side, j, k) order.  The constructor only coerces the
    arrays; use :func:`validate` to check shape, parity and finiteness.
    """

    n: int
    degree: int
    center: np.ndarray
    points: np.ndarray

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float)
        points = np.asarray(self.points, dtype=float)
        center.flags.writeable = False
        points.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "points", points)

    @property
    def half_order(self) -> int:
        return self.degree // 2

    def point(self, i: int, j: int, k: int) -> np.ndarray:
        """Control point P[i,j,k] with 1-based side index i."""
        return self.points[i - 1, j, k]


@dataclass(frozen=True)
class SurfaceSample:
    """Evaluated surface point plus the weight deficiency B_0 there."""

    position: np.ndarray
    deficiency: float


@dataclass(frozen=True)
class Violation:
    """One validation finding; warnings do not make a net unusable."""

    code: str
    message: str
    warning: bool = False


def expected_point_count(n: int, degree: int) -> int:
    """Corner-block points of a valid net (central point not included)."""
    m = degree // 2
    return n * (m + 1) ** 2


def validate(net: ControlNet, strict: bool = False) -> list[Violation]:
    """Check a net and return all violations (empty list = valid).

    With ``strict`` the boundary polygons are additionally checked for a
    junction break between adjacent corner blocks: the segment joining the
    two half-rows of a side should be commensurate with the rest of the
    polygon in a net authored against a single shared network.  Breaks are
    reported as warnings.
    """
    found: list[Violation] = []
    if not isinstance(net.n, int) or net.n < 3:
        found.append(Violation("sides", f"side count must be >= 3, got {net.n!r}"))
    if not isinstance(net.degree, int) or net.degree < 1:
        found.append(Violation("degree", f"degree must be >= 1, got {net.degree!r}"))
    elif net.degree % 2 == 0:
        found.append(Violation("parity", f"degree must be odd, got {net.degree}"))
    if net.center.shape != (3,):
        found.append(Violation("center", f"central point has shape {net.center.shape}, expected (3,)"))
    elif not np.all(np.isfinite(net.center)):
        found.append(Violation("finite", "central point has non-finite coordinates"))

    if found and any(v.code in ("sides", "degree") for v in found):
        return found

    m = net.degree // 2
    want = (net.n, m + 1, m + 1, 3)
    if net.points.shape != want:
        found.append(
            Violation(
                "count",
                f"control points have shape {net.points.shape}, expected {want} "
                f"({expected_point_count(net.n, net.degree)} points)",
            )
        )
        return found
    if not np.all(np.isfinite(net.points)):
        found.append(Violation("finite", "control points contain non-finite coordinates"))

    if strict and not found:
        for s in range(1, net.n + 1):
            poly = boundary_polygon(net, s)
            seams = np.linalg.norm(np.diff(poly, axis=0), axis=1)
            junction = seams[m]  # between the two corner-block halves
            others = np.delete(seams, m)
            limit = 4.0 * max(float(np.max(others)), 1e-30)
            if junction > limit:
                found.append(
                    Violation(
                        "junction",
                        f"side {s}: boundary polygon breaks between corner blocks "
                        f"(gap {junction:.3g} vs neighbor spacing {np.max(others):.3g})",
                        warning=True,
                    )
                )
    return found


def boundary_polygon(net: ControlNet, s: int) -> np.ndarray:
    """Bezier control polygon of the side-s boundary curve, (d+1, 3).

    The first half comes from corner s (its j row), the second from corner
    s-1 (its k row reversed); the curve parameter is t = h_{s+1}.
    """
    if not 1 <= s <= net.n:
        raise ValueError(f"side index {s} out of range 1..{net.n}")
    m = net.half_order
    prev = (s - 2) % net.n + 1
    first = [net.point(s, j, 0) for j in range(m + 1)]
    second = [net.point(prev, 0, k) for k in range(m, -1, -1)]
    return np.asarray(first + second)


def _weights(net: ControlNet, hf: np.ndarray) -> np.ndarray:
    """Corner weight tensor B_j(h_{i+1}) * B_k(h_i), shape (..., n, m+1, m+1)."""
    nxt = np.roll(hf, -1, axis=-1)
    b_next = _half_rows(net.degree, nxt)
    b_base = _half_rows(net.degree, hf)
    return b_next[..., :, :, None] * b_base[..., :, None, :]


def deficiency(net: ControlNet, hf) -> float:
    """Weight deficiency B_0 = 1 - sum of all corner weights."""
    hf = np.asarray(hf, dtype=float)
    if hf.shape != (net.n,):
        raise ValueError(f"height field must have shape ({net.n},), got {hf.shape}")
    return float(1.0 - _weights(net, hf).sum())


def evaluate_batch(net: ControlNet, points, settings: BisectionSettings | None = None):
    """Evaluate the surface at domain points (N, 2).

    Returns (positions (N, 3), deficiencies (N,)).
    """
    cfg = DomainConfig(net.n)
    hf = height_field_batch(cfg, points, settings)
    w = _weights(net, hf)
    b0 = 1.0 - w.sum(axis=(1, 2, 3))
    pos = np.einsum("pijk,ijkc->pc", w, net.points) + b0[:, None] * net.center
    return pos, b0


def evaluate(net: ControlNet, p, settings: BisectionSettings | None = None) -> SurfaceSample:
    """Evaluate the surface at one domain point."""
    pos, b0 = evaluate_batch(net, np.asarray(p, dtype=float)[None, :], settings)
    return SurfaceSample(pos[0], float(b0[0]))


# ---------------------------------------------------------------------------
# .ogb control-net files
#
#   line 1: "n d"; line 2: "x y z" of the central point; then
#   n*(m+1)^2 lines of "x y z" in (side, j, k) order.  '#' starts a
#   comment, blank lines are ignored, the radix is always '.'.
# ---------------------------------------------------------------------------


class OgbParseError(ValueError):
    """Malformed .ogb data; the message carries the offending line number."""

    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def parse_net(text: str, source: str = "<string>") -> ControlNet:
    """Parse .ogb text into a validated ControlNet."""
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise OgbParseError(source, 1, "empty file")

    lineno, head = rows[0]
    if len(head) != 2:
        raise OgbParseError(source, lineno, f"expected 'n d' header, got {' '.join(head)!r}")
    try:
        n, degree = int(head[0]), int(head[1])
    except ValueError:
        raise OgbParseError(source, lineno, f"non-integer header {' '.join(head)!r}") from None
    if n < 3:
        raise OgbParseError(source, lineno, f"side count must be >= 3, got {n}")
    if degree < 1 or degree % 2 == 0:
        raise OgbParseError(source, lineno, f"degree must be odd and >= 1, got {degree}")

    want = expected_point_count(n, degree) + 1  # central point first
    coords = []
    for lineno, tokens in rows[1:]:
        if len(tokens) != 3:
            raise OgbParseError(source, lineno, f"expected 'x y z', got {' '.join(tokens)!r}")
        try:
            xyz = [float(tok) for tok in tokens]
        except ValueError:
            raise OgbParseError(source, lineno, f"non-numeric coordinate in {' '.join(tokens)!r}") from None
        if not all(math.isfinite(c) for c in xyz):
            raise OgbParseError(source, lineno, "non-finite coordinate")
        coords.append(xyz)
        if len(coords) > want:
            raise OgbParseError(source, lineno, f"more than {want} point lines")
    if len(coords) < want:
        raise OgbParseError(
            source, rows[-1][0], f"expected {want} point lines, found {len(coords)}"
        )

    m = degree // 2
    pts = np.asarray(coords[1:]).reshape(n, m + 1, m + 1, 3)
    return ControlNet(n, degree, np.asarray(coords[0]), pts)


def load_net(path) -> ControlNet:
    """Load a control net from an .ogb file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_net(fh.read(), source=str(path))


def format_net(net: ControlNet) -> str:
    """Serialize a net as .ogb text (round-trips coordinates exactly)."""
    lines = [f"{net.n} {net.degree}", _xyz(net.center)]
    m = net.half_order
    for i in range(net.n):
        for j in range(m + 1):
            for k in range(m + 1):
                lines.append(_xyz(net.points[i, j, k]))
    return "\n".join(lines) + "\n"


def _xyz(p) -> str:
    return f"{float(p[0])!r} {float(p[1])!r} {float(p[2])!r}"


def save_net(path, net: ControlNet) -> None:
    """Write a control net to an .ogb file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_net(net))


def demo_net_path() -> str:
    """Filesystem path of the bundled five-sided cubic sample net."""
    from importlib.resources import files

    return str(files("circpatch").joinpath("data/pentagon_cubic.ogb"))


def demo_net(n: int = 5, degree: int = 3, height: float = 0.8) -> ControlNet:
    """A dome-shaped sample net: corners on the unit circle, paraboloid lift.

    ``height`` is the apex z; 0 gives a planar net (all z = 0).
    """
    cfg = DomainConfig(n)
    if degree < 1 or degree % 2 == 0:
        raise ValueError(f"degree must be odd and >= 1, got {degree}")
    m = degree // 2
    corners = np.array(
        [[math.cos(cfg.corner_angle(i)), math.sin(cfg.corner_angle(i))] for i in range(1, n + 1)]
    )

    def lift(q):
        return (q[0], q[1], height * (1.0 - (q[0] ** 2 + q[1] ** 2)))

    pts = np.empty((n, m + 1, m + 1, 3))
    for i in range(n):
        c = corners[i]
        to_prev = corners[i - 1] - c
        to_next = corners[(i + 1) % n] - c
        for j in range(m + 1):
            for k in range(m + 1):
                q = c + (j / degree) * to_prev + (k / degree) * to_next
                pts[i, j, k] = lift(q)
    return ControlNet(n, degree, np.array([0.0, 0.0, height]), pts)

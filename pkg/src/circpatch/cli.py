"""Command-line front end.

Subcommands::

    hmap        height-value bitmap of one side's mapping (PPM, P6)
    levels      constant-parameter lines over the disk (SVG)
    corner      two adjacent level-line families (SVG)
    constraint  mirrored level lines meeting a side with shared tangents (SVG)
    eval        sample an .ogb control net into an OBJ mesh (+ isophote PPM)

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 numerical
failure (bisection bracket loss).  All emitters are deterministic and
file writes are atomic (temp file + rename).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    DomainConfig,
    from_canonical,
    level_end_tangent,
    level_set_points,
)
from .mesh import SurfaceMesh, finite_difference_normals, sample_surface, tessellate_disk
from .param import BisectionSettings, BracketError, DomainError, height_for_side_batch
from .patch import OgbParseError, load_net, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

LEVEL_SEGMENTS = 128  # all level lines are emitted as 128-segment polylines


class UsageError(ValueError):
    """Bad command line or out-of-range option."""


@dataclass
class RenderSpec:
    """Options shared by the figure emitters."""

    resolution: int = 400
    sides: int = 5
    side_index: int = 1
    count: int = 11
    light: tuple[float, float, float] = (0.0, 0.0, 1.0)
    output_path: str = "out"

    def check(self, max_sides: int | None = None) -> None:
        if self.resolution < 16:
            raise UsageError(f"resolution must be >= 16, got {self.resolution}")
        if self.count < 2:
            raise UsageError(f"count must be >= 2, got {self.count}")
        if self.sides < 3 or (max_sides is not None and self.sides > max_sides):
            hi = f"..{max_sides}" if max_sides else ""
            raise UsageError(f"sides must be >= 3{hi}, got {self.sides}")
        if not 1 <= self.side_index <= self.sides:
            raise UsageError(f"side {self.side_index} out of range 1..{self.sides}")


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".circpatch-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_ppm(path: str, image: np.ndarray) -> None:
    """Write an (H, W, 3) uint8 image as binary PPM (P6)."""
    h, w = image.shape[:2]
    _atomic_write(path, f"P6\n{w} {h}\n255\n".encode() + image.astype(np.uint8).tobytes())


def read_ppm(path: str) -> np.ndarray:
    """Read back a P6 image written by :func:`write_ppm`."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError(f"{path}: not a circpatch P6 file")
    w, h = (int(t) for t in dims.split())
    return np.frombuffer(rest[: w * h * 3], dtype=np.uint8).reshape(h, w, 3)


# ---------------------------------------------------------------------------
# hmap
# ---------------------------------------------------------------------------


def height_colors(h: np.ndarray) -> np.ndarray:
    """Green (h=0) -> yellow (h=0.5) -> red (h=1), as (N, 3) uint8."""
    h = np.asarray(h, dtype=float)
    r = np.where(h <= 0.5, 510.0 * h, 255.0)
    g = np.where(h <= 0.5, 255.0, 510.0 * (1.0 - h))
    rgb = np.stack([r, g, np.zeros_like(r)], axis=-1)
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def pixel_grid(resolution: int):
    """Pixel-center coordinates: u spans [-1, 1] across columns, v down rows."""
    xs = np.linspace(-1.0, 1.0, resolution)
    u, v = np.meshgrid(xs, -xs)
    return u, v


def render_hmap(cfg: DomainConfig, side: int, resolution: int,
                settings: BisectionSettings | None = None) -> np.ndarray:
    """Rasterize h values of one side's mapping; out-of-disk pixels white."""
    u, v = pixel_grid(resolution)
    inside = u * u + v * v <= 1.0 + 1e-12
    image = np.full((resolution, resolution, 3), 255, dtype=np.uint8)
    pts = np.column_stack([u[inside], v[inside]])
    h = height_for_side_batch(cfg, side, pts, settings)
    image[inside] = height_colors(h)
    return image


def cmd_hmap(spec: RenderSpec, settings: BisectionSettings | None = None) -> None:
    spec.check()
    image = render_hmap(DomainConfig(spec.sides), spec.side_index, spec.resolution, settings)
    write_ppm(spec.output_path, image)


# ---------------------------------------------------------------------------
# SVG figures
# ---------------------------------------------------------------------------


def _pts_attr(points: np.ndarray) -> str:
    return " ".join(f"{x:.12f},{y:.12f}" for x, y in points)


def _polyline(points: np.ndarray, stroke: str, cls: str, extra: str = "") -> str:
    return (
        f'<polyline class="{cls}" stroke="{stroke}"{extra} '
        f'points="{_pts_attr(points)}"/>'
    )


def _svg_document(body: list[str], resolution: int) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{resolution}" height="{resolution}" viewBox="-1.1 -1.1 2.2 2.2">\n'
        '<g transform="scale(1,-1)" fill="none" stroke-width="0.008" '
        'stroke-linecap="round" stroke-linejoin="round">\n'
    )
    return head + "\n".join(body) + "\n</g>\n</svg>\n"


def _side_points(cfg: DomainConfig, i: int) -> np.ndarray:
    lo, hi = cfg.side_arc(i)
    ang = np.linspace(lo, hi, LEVEL_SEGMENTS + 1)
    return np.column_stack([np.cos(ang), np.sin(ang)])


def _side_arcs(cfg: DomainConfig, roles: dict[int, str]) -> list[str]:
    """Rim arcs with per-side colors; `roles` maps side index to a role."""
    colors = {"base": "green", "base2": "blue", "mirror-low": "red",
              "mirror-high": "blue", "distant": "red", "adjacent": "black"}
    out = []
    for i in range(1, cfg.n + 1):
        role = roles.get(i, "adjacent")
        out.append(_polyline(_side_points(cfg, i), colors[role], f"side side-{i} {role}"))
    return out


def _level_polyline(cfg: DomainConfig, side: int, h: float, stroke: str,
                    cls: str, extra: str = "") -> str:
    pts = level_set_points(cfg, h, LEVEL_SEGMENTS + 1)
    return _polyline(from_canonical(cfg, side, pts), stroke, cls, extra)


def _distant_roles(cfg: DomainConfig, bases: list[int]) -> dict[int, str]:
    near = set()
    for b in bases:
        near.update({b, (b - 2) % cfg.n + 1, b % cfg.n + 1})
    return {i: "distant" for i in range(1, cfg.n + 1) if i not in near}


def render_levels(cfg: DomainConfig, side: int, count: int) -> str:
    """Level lines of one mapping; the straight h_hat chord is always drawn."""
    roles = _distant_roles(cfg, [side])
    roles[side] = "base"
    body = _side_arcs(cfg, roles)
    hs = [ell / (count - 1) for ell in range(count)]
    for ell, h in enumerate(hs):
        body.append(_level_polyline(cfg, side, h, "black", f"level level-{ell}"))
    if cfg.n > 3 and not any(abs(h - cfg.h_hat) <= 1e-12 for h in hs):
        body.append(_level_polyline(cfg, side, cfg.h_hat, "black", "level level-hat"))
    return _svg_document(body, 640)


def cmd_levels(spec: RenderSpec, settings: BisectionSettings | None = None) -> None:
    spec.check(max_sides=12)
    svg = render_levels(DomainConfig(spec.sides), spec.side_index, spec.count)
    _atomic_write(spec.output_path, svg.encode())


def render_corner(cfg: DomainConfig, side: int, count: int) -> str:
    """Overlay of the level-line families of two adjacent mappings."""
    nxt = side % cfg.n + 1
    roles = _distant_roles(cfg, [side, nxt])
    roles[side] = "base"
    roles[nxt] = "base2"
    body = _side_arcs(cfg, roles)
    for ell in range(count):
        h = ell / (count - 1)
        body.append(_level_polyline(cfg, side, h, "green", f"level family-a level-{ell}"))
        body.append(_level_polyline(cfg, nxt, h, "blue", f"level family-b level-{ell}"))
    return _svg_document(body, 640)


def cmd_corner(spec: RenderSpec, settings: BisectionSettings | None = None) -> None:
    spec.check()
    svg = render_corner(DomainConfig(spec.sides), spec.side_index, spec.count)
    _atomic_write(spec.output_path, svg.encode())


def constraint_meet(cfg: DomainConfig, i: int, t: float, family: str = "low"):
    """Where a mirrored level line meets side i, with its tangent there.

    ``family`` selects the curve: "low" is the h_{i-1} = t level line
    (it reaches side i at its upper endpoint), "high" the h_{i+1} = 1 - t
    line (lower endpoint).  Both families hit the same rim point with the
    same tangent line; emitting one marker per t therefore suffices.
    """
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie strictly inside (0, 1)")
    if family == "low":
        base = (i - 2) % cfg.n + 1
        point, tangent = level_end_tangent(cfg, t, +1)
    elif family == "high":
        base = i % cfg.n + 1
        point, tangent = level_end_tangent(cfg, 1.0 - t, -1)
    else:
        raise ValueError(f"family must be 'low' or 'high', got {family!r}")
    return from_canonical(cfg, base, point), from_canonical(cfg, base, tangent)


def render_constraint(cfg: DomainConfig, side: int, count: int) -> str:
    """Mirrored level lines of the two neighbors of `side`, with markers."""
    prev = (side - 2) % cfg.n + 1
    nxt = side % cfg.n + 1
    roles = _distant_roles(cfg, [prev, nxt])
    roles[side] = "base"
    roles[prev] = "mirror-low"
    roles[nxt] = "mirror-high"
    body = _side_arcs(cfg, roles)
    marks = []
    for ell in range(count):
        t = ell / (count - 1)
        body.append(_level_polyline(cfg, prev, t, "red", f"level family-low level-{ell}"))
        body.append(_level_polyline(cfg, nxt, 1.0 - t, "blue", f"level family-high level-{ell}"))
        if 0.0 < t < 1.0:
            point, _ = constraint_meet(cfg, side, t)
            marks.append(
                f'<circle class="tangent-mark" cx="{point[0]:.12f}" '
                f'cy="{point[1]:.12f}" r="0.015" fill="black" stroke="none"/>'
            )
    return _svg_document(body + marks, 640)


def cmd_constraint(spec: RenderSpec, settings: BisectionSettings | None = None) -> None:
    spec.check()
    svg = render_constraint(DomainConfig(spec.sides), spec.side_index, spec.count)
    _atomic_write(spec.output_path, svg.encode())


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def format_obj(sm: SurfaceMesh) -> str:
    """Wavefront OBJ with v/vn/f records only."""
    lines = [f"v {p[0]:.12g} {p[1]:.12g} {p[2]:.12g}" for p in sm.positions]
    lines += [f"vn {q[0]:.12g} {q[1]:.12g} {q[2]:.12g}" for q in sm.normals]
    lines += [
        f"f {a + 1}//{a + 1} {b + 1}//{b + 1} {c + 1}//{c + 1}"
        for a, b, c in sm.triangles
    ]
    return "\n".join(lines) + "\n"


def render_isophote_bands(net, resolution: int, light, bands: int,
                          settings: BisectionSettings | None = None) -> np.ndarray:
    """Domain-space bitmap of the isophote scalar quantized into bands."""
    ell = np.asarray(light, dtype=float)
    norm = np.linalg.norm(ell)
    if norm < 1e-12:
        raise UsageError("light vector must be nonzero")
    u, v = pixel_grid(resolution)
    inside = u * u + v * v <= 1.0 + 1e-12
    pts = np.column_stack([u[inside], v[inside]])
    normals, _ = finite_difference_normals(net, pts, settings)
    scalar = np.clip(normals @ (ell / norm), -1.0, 1.0)
    idx = np.minimum((0.5 * (scalar + 1.0) * bands).astype(int), bands - 1)
    shade = np.where(idx % 2 == 0, 235, 60).astype(np.uint8)
    image = np.full((resolution, resolution, 3), 255, dtype=np.uint8)
    image[inside] = shade[:, None]
    return image


def cmd_eval(net_path: str, spec: RenderSpec, settings: BisectionSettings | None = None,
             rings: int = 16, per_side: int = 8, isophotes: bool = False,
             check: bool = False, strict: bool = False,
             isophote_path: str | None = None) -> int:
    net = load_net(net_path)
    issues = validate(net, strict=strict)
    for issue in issues:
        print(f"{'warning' if issue.warning else 'error'}: {issue.code}: {issue.message}",
              file=sys.stderr)
    if any(not issue.warning for issue in issues):
        return EXIT_INPUT
    if check:
        return EXIT_OK

    dm = tessellate_disk(DomainConfig(net.n), rings, per_side)
    sm = sample_surface(net, dm, settings)
    _atomic_write(spec.output_path, format_obj(sm).encode())

    if isophotes:
        target = isophote_path or os.path.splitext(spec.output_path)[0] + "_isophotes.ppm"
        image = render_isophote_bands(net, spec.resolution, spec.light, spec.count, settings)
        write_ppm(target, image)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _light(text: str) -> tuple[float, float, float]:
    try:
        x, y, z = (float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z, got {text!r}") from None
    return (x, y, z)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circpatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--sides", type=int, default=5, help="side count n")
    common.add_argument("--side", type=int, default=1, help="base side index (1-based)")
    common.add_argument("--count", type=int, default=11, help="level lines / isophote bands")
    common.add_argument("--resolution", type=int, default=400, help="image size in pixels")
    common.add_argument("--out", required=True, help="output file path")
    common.add_argument("--epsilon", type=float, default=1e-7,
                        help="bisection exclusion band around the straight level")
    common.add_argument("--tolerance", type=float, default=1e-12,
                        help="bisection convergence threshold")

    sub.add_parser("hmap", parents=[common], help="height bitmap (PPM)")
    sub.add_parser("levels", parents=[common], help="level-line plot (SVG)")
    sub.add_parser("corner", parents=[common], help="adjacent-family plot (SVG)")
    sub.add_parser("constraint", parents=[common], help="mirror-constraint plot (SVG)")

    pe = sub.add_parser("eval", parents=[common], help="evaluate an .ogb net (OBJ)")
    pe.add_argument("net", help="control net file (.ogb)")
    pe.add_argument("--rings", type=int, default=16, help="tessellation rings")
    pe.add_argument("--per-side", type=int, default=8, dest="per_side",
                    help="rim subdivisions per side")
    pe.add_argument("--light", type=_light, default=(0.0, 0.0, 1.0),
                    help="light direction X,Y,Z for isophotes")
    pe.add_argument("--isophotes", action="store_true",
                    help="also write a banded isophote bitmap")
    pe.add_argument("--isophote-out", default=None, help="isophote bitmap path")
    pe.add_argument("--check", action="store_true",
                    help="validate the net and exit")
    pe.add_argument("--strict", action="store_true",
                    help="add shared-network plausibility warnings")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = BisectionSettings(epsilon_gap=args.epsilon, tolerance=args.tolerance)
        spec = RenderSpec(
            resolution=args.resolution,
            sides=args.sides,
            side_index=args.side,
            count=args.count,
            light=getattr(args, "light", (0.0, 0.0, 1.0)),
            output_path=args.out,
        )
        if args.command == "hmap":
            cmd_hmap(spec, settings)
        elif args.command == "levels":
            cmd_levels(spec, settings)
        elif args.command == "corner":
            cmd_corner(spec, settings)
        elif args.command == "constraint":
            cmd_constraint(spec, settings)
        elif args.command == "eval":
            return cmd_eval(
                args.net, spec, settings,
                rings=args.rings, per_side=args.per_side,
                isophotes=args.isophotes, check=args.check,
                strict=args.strict, isophote_path=args.isophote_out,
            )
        return EXIT_OK
    except UsageError as exc:
        print(f"circpatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # covers .ogb parse errors, bad settings, and out-of-disk points
        print(f"circpatch: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"circpatch: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BracketError as exc:
        print(f"circpatch: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

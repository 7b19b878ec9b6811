import math

import numpy as np
import pytest

from circpatch.domain import (
    Arc,
    BoundaryArc,
    DomainConfig,
    Line,
    arc_endpoints,
    from_canonical,
    level_end_tangent,
    level_set,
    level_set_points,
    side_corners,
    tangency_angle,
    to_canonical,
)


def test_config_rejects_bad_side_counts():
    for bad in (2, 0, -1, 3.0, "5", True):
        with pytest.raises(ValueError):
            DomainConfig(bad)


def test_special_values():
    cfg = DomainConfig(5)
    assert cfg.h_hat == pytest.approx(1 / 3, abs=1e-15)
    assert cfg.u_hat == pytest.approx(0.5, abs=1e-15)
    assert DomainConfig(3).h_hat == 1.0
    assert DomainConfig(3).u_hat == -1.0
    assert DomainConfig(4).u_hat == pytest.approx(0.0, abs=1e-15)


def test_side_corners_base_arc():
    a, b = side_corners(DomainConfig(5), 1)
    assert a == pytest.approx((math.cos(math.pi / 5), -math.sin(math.pi / 5)), abs=1e-15)
    assert b == pytest.approx((math.cos(math.pi / 5), math.sin(math.pi / 5)), abs=1e-15)
    a, b = side_corners(DomainConfig(4), 1)
    assert a == pytest.approx((math.cos(math.pi / 4), -math.sin(math.pi / 4)), abs=1e-15)
    assert b == pytest.approx((math.cos(math.pi / 4), math.sin(math.pi / 4)), abs=1e-15)


def test_side_corners_triangle_second_side():
    a, b = side_corners(DomainConfig(3), 2)
    assert a == pytest.approx((math.cos(math.pi / 3), math.sin(math.pi / 3)), abs=1e-15)
    assert b == pytest.approx((-1.0, 0.0), abs=1e-15)


def test_side_index_out_of_range():
    cfg = DomainConfig(5)
    for bad in (0, 6, -1):
        with pytest.raises(ValueError):
            side_corners(cfg, bad)
        with pytest.raises(ValueError):
            to_canonical(cfg, bad, (0.1, 0.1))


def test_to_canonical_identity_and_quarter_turn():
    assert np.allclose(to_canonical(DomainConfig(5), 1, (0.3, 0.2)), (0.3, 0.2))
    assert np.allclose(to_canonical(DomainConfig(4), 2, (0.0, 1.0)), (1.0, 0.0), atol=1e-15)


def test_to_canonical_preserves_norm():
    rng = np.random.default_rng(7)
    cfg = DomainConfig(6)
    pts = rng.uniform(-0.7, 0.7, (20, 2))
    rot = to_canonical(cfg, 4, pts)
    assert np.allclose(np.hypot(rot[:, 0], rot[:, 1]), np.hypot(pts[:, 0], pts[:, 1]))
    back = from_canonical(cfg, 4, rot)
    assert np.allclose(back, pts, atol=1e-15)


def test_arc_endpoints_examples():
    cfg = DomainConfig(5)
    p1, p2 = arc_endpoints(cfg, 0.0)
    assert p1 == pytest.approx((math.cos(math.pi / 5), math.sin(math.pi / 5)), abs=1e-15)
    assert p2 == pytest.approx((math.cos(math.pi / 5), -math.sin(math.pi / 5)), abs=1e-15)
    p1, p2 = arc_endpoints(cfg, 1.0)
    assert p1 == pytest.approx((math.cos(3 * math.pi / 5), math.sin(3 * math.pi / 5)), abs=1e-15)
    p1, p2 = arc_endpoints(DomainConfig(4), 0.5)
    assert p1 == pytest.approx((0.0, 1.0), abs=1e-12)
    assert p2 == pytest.approx((0.0, -1.0), abs=1e-12)


def test_arc_endpoints_rejects_out_of_range():
    cfg = DomainConfig(5)
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(ValueError):
            arc_endpoints(cfg, bad)


def test_level_set_variants():
    cfg = DomainConfig(5)
    ls = level_set(cfg, 1 / 3)
    assert isinstance(ls, Line)
    assert ls.abscissa == pytest.approx(0.5, abs=1e-15)
    assert isinstance(level_set(cfg, 0.0), BoundaryArc)
    assert isinstance(level_set(cfg, 1.0), BoundaryArc)
    assert isinstance(level_set(cfg, 0.25), Arc)
    # n=3: the Line variant is unreachable, h=1 degenerates to a point
    assert isinstance(level_set(DomainConfig(3), 1.0), BoundaryArc)
    assert isinstance(level_set(DomainConfig(3), 0.999), Arc)


def test_level_set_quarter_height_values():
    # phi = 0.3*pi, theta = 0.25*pi, psi = -0.05*pi
    ls = level_set(DomainConfig(5), 0.25)
    ox = math.sin(0.25 * math.pi) / math.sin(-0.05 * math.pi)
    r = abs(math.sin(0.3 * math.pi) / math.sin(-0.05 * math.pi))
    assert ls.center == pytest.approx((ox, 0.0), abs=1e-15)
    assert ls.radius == pytest.approx(r, abs=1e-15)
    assert ls.center[0] == pytest.approx(-4.5202, abs=1e-3)
    assert ls.radius == pytest.approx(5.1718, abs=1e-3)
    assert math.hypot(ls.p1[0] - ls.center[0], ls.p1[1]) == pytest.approx(ls.radius, abs=1e-12)


@pytest.mark.parametrize("n", range(3, 9))
def test_level_circle_passes_through_endpoints(n):
    cfg = DomainConfig(n)
    for k in range(1, 500):
        h = k / 500
        if abs(h - cfg.h_hat) < 1e-3:
            continue
        ls = level_set(cfg, h)
        assert isinstance(ls, Arc)
        d1 = math.hypot(ls.p1[0] - ls.center[0], ls.p1[1] - ls.center[1])
        d2 = math.hypot(ls.p2[0] - ls.center[0], ls.p2[1] - ls.center[1])
        assert abs(d1 - ls.radius) <= 1e-12
        assert abs(d2 - ls.radius) <= 1e-12


@pytest.mark.parametrize("n", range(4, 11))
def test_straight_level_identity(n):
    # psi vanishes identically at h_hat: h*pi == (2h+1)*pi/n there
    cfg = DomainConfig(n)
    h = cfg.h_hat
    psi = h * math.pi - (2 * h + 1) * math.pi / n
    assert abs(psi) <= 1e-15


def test_level_set_points_lie_on_the_level_circle():
    cfg = DomainConfig(5)
    for h in (0.05, 0.25, 0.6, 0.95):
        ls = level_set(cfg, h)
        pts = level_set_points(cfg, h, 33)
        radii = np.hypot(pts[:, 0] - ls.center[0], pts[:, 1] - ls.center[1])
        assert np.abs(radii - ls.radius).max() <= 1e-9 * max(1.0, ls.radius)
        assert np.all(np.hypot(pts[:, 0], pts[:, 1]) <= 1 + 1e-9)
        assert np.allclose(pts[0], ls.p2, atol=1e-12)
        assert np.allclose(pts[-1], ls.p1, atol=1e-12)


def test_level_set_points_midpoint_on_axis():
    for n in range(3, 9):
        cfg = DomainConfig(n)
        for h in (0.1, 0.45, 0.8):
            pts = level_set_points(cfg, h, 9)
            assert abs(pts[4, 1]) <= 1e-8


def test_level_set_points_straight_chord():
    cfg = DomainConfig(6)
    pts = level_set_points(cfg, cfg.h_hat, 17)
    assert np.abs(pts[:, 0] - cfg.u_hat).max() == 0.0
    assert pts[0, 1] == pytest.approx(-math.sin(math.pi / 4), abs=1e-15)
    assert pts[-1, 1] == pytest.approx(math.sin(math.pi / 4), abs=1e-15)


def test_level_set_points_boundary_cases():
    cfg = DomainConfig(5)
    base = level_set_points(cfg, 0.0, 21)
    assert np.abs(np.hypot(base[:, 0], base[:, 1]) - 1).max() <= 1e-15
    assert base[:, 0].min() >= math.cos(math.pi / 5) - 1e-12
    far = level_set_points(cfg, 1.0, 21)
    assert np.abs(np.hypot(far[:, 0], far[:, 1]) - 1).max() <= 1e-15
    assert far[:, 0].max() <= math.cos(3 * math.pi / 5) + 1e-12
    with pytest.raises(ValueError):
        level_set_points(cfg, 0.5, 1)


def test_tangency_angle_matches_height_times_pi():
    assert tangency_angle(DomainConfig(5), 0.25) == pytest.approx(0.25 * math.pi, abs=1e-9)
    assert tangency_angle(DomainConfig(6), 0.75) == pytest.approx(0.75 * math.pi, abs=1e-9)
    # the level arc merges into the rim as h -> 0
    assert tangency_angle(DomainConfig(8), 1e-6) < 1e-5


@pytest.mark.parametrize("n", range(3, 9))
def test_tangency_angle_sweep(n):
    cfg = DomainConfig(n)
    for h in np.linspace(0.02, 0.98, 49):
        if abs(h - cfg.h_hat) < 1e-6:
            continue
        assert abs(tangency_angle(cfg, float(h)) - h * math.pi) <= 1e-8


def test_tangency_angle_rejects_degenerate_levels():
    cfg = DomainConfig(5)
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            tangency_angle(cfg, bad)
    with pytest.raises(ValueError):
        tangency_angle(cfg, cfg.h_hat)


def test_level_end_tangent_endpoints():
    cfg = DomainConfig(5)
    p1, d1 = level_end_tangent(cfg, 0.3, +1)
    assert np.allclose(p1, arc_endpoints(cfg, 0.3)[0])
    assert math.hypot(*d1) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        level_end_tangent(cfg, 0.0, +1)
    with pytest.raises(ValueError):
        level_end_tangent(cfg, 0.3, 2)

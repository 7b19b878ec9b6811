import math

import numpy as np
import pytest

from circpatch.domain import DomainConfig
from circpatch.mesh import (
    isophote_scalar,
    sample_surface,
    tessellate_disk,
)
from circpatch.param import height_field_batch
from circpatch.patch import ControlNet, demo_net

from oracles import decasteljau, edge_incidence, is_watertight_disk


@pytest.mark.parametrize("n,rings,per_side", [(5, 1, 8), (5, 4, 6), (3, 3, 4), (8, 2, 2)])
def test_counts_and_topology(n, rings, per_side):
    cfg = DomainConfig(n)
    dm = tessellate_disk(cfg, rings, per_side)
    k = n * per_side
    assert len(dm.vertices) == 1 + k * rings * (rings + 1) // 2
    assert len(dm.triangles) == k * rings * rings
    counts = edge_incidence(dm.triangles)
    edges = len(counts)
    assert len(dm.vertices) - edges + len(dm.triangles) == 1  # disk Euler characteristic
    assert sorted(set(counts.values())) in ([1, 2], [1])
    assert sum(1 for c in counts.values() if c == 1) == k * rings
    assert is_watertight_disk(dm.triangles)


def test_triangles_are_counterclockwise():
    dm = tessellate_disk(DomainConfig(5), 3, 5)
    v = dm.vertices
    for a, b, c in dm.triangles:
        cross = (v[b][0] - v[a][0]) * (v[c][1] - v[a][1]) - (v[b][1] - v[a][1]) * (
            v[c][0] - v[a][0]
        )
        assert cross > 0.0


def test_vertices_inside_disk_and_corners_pinned():
    cfg = DomainConfig(5)
    dm = tessellate_disk(cfg, 3, 4)
    norms = np.hypot(dm.vertices[:, 0], dm.vertices[:, 1])
    assert norms.max() <= 1.0 + 1e-12
    rim = dm.boundary_flags > 0
    assert np.abs(norms[rim] - 1.0).max() <= 1e-12
    assert not np.any(rim & (norms < 1.0 - 1e-12))
    for i in range(1, 6):
        a = cfg.corner_angle(i)
        d = np.hypot(dm.vertices[:, 0] - math.cos(a), dm.vertices[:, 1] - math.sin(a))
        assert d.min() <= 1e-12


def test_boundary_flags_match_side_arcs():
    cfg = DomainConfig(4)
    dm = tessellate_disk(cfg, 2, 3)
    for idx in np.flatnonzero(dm.boundary_flags):
        side = int(dm.boundary_flags[idx])
        lo, hi = cfg.side_arc(side)
        ang = math.atan2(dm.vertices[idx][1], dm.vertices[idx][0])
        ang = ang if ang >= lo - 1e-12 else ang + 2 * math.pi
        assert lo - 1e-12 <= ang <= hi + 1e-12


def test_rejects_bad_resolutions():
    cfg = DomainConfig(5)
    with pytest.raises(ValueError):
        tessellate_disk(cfg, 0)
    with pytest.raises(ValueError):
        tessellate_disk(cfg, 2, per_side=0)


def test_no_height_leaves_unit_interval_on_mesh():
    cfg = DomainConfig(6)
    dm = tessellate_disk(cfg, 4, 4)
    hf = height_field_batch(cfg, dm.vertices)
    assert hf.min() >= 0.0
    assert hf.max() <= 1.0 + 1e-12


def test_constant_net_collapses_and_flags():
    value = (1.0, 2.0, 3.0)
    net = ControlNet(5, 3, np.array(value), np.tile(value, (5, 2, 2, 1)))
    dm = tessellate_disk(DomainConfig(5), 2, 4)
    sm = sample_surface(net, dm)
    assert np.abs(sm.positions - value).max() <= 1e-13
    assert np.all(sm.degenerate)
    assert np.abs(np.linalg.norm(sm.normals, axis=1) - 1.0).max() <= 1e-9


def test_planar_net_has_vertical_normals():
    net = demo_net(5, 3, height=0.0)
    dm = tessellate_disk(DomainConfig(5), 3, 4)
    sm = sample_surface(net, dm)
    assert not np.any(sm.degenerate)
    assert np.abs(np.abs(sm.normals[:, 2]) - 1.0).max() <= 1e-6
    assert np.abs(sm.normals[:, :2]).max() <= 1e-6


def test_boundary_vertices_lie_on_boundary_curves():
    cfg = DomainConfig(5)
    net = demo_net(5, 3)
    dm = tessellate_disk(cfg, 3, 6)
    sm = sample_surface(net, dm)
    hf = height_field_batch(cfg, dm.vertices)
    for idx in np.flatnonzero(dm.boundary_flags):
        s = int(dm.boundary_flags[idx])
        prev = (s - 2) % 5 + 1
        ctrl = [net.point(s, 0, 0), net.point(s, 1, 0),
                net.point(prev, 0, 1), net.point(prev, 0, 0)]
        t = hf[idx][s % 5]
        assert np.abs(sm.positions[idx] - decasteljau(ctrl, t)).max() <= 1e-8


def test_degenerate_normals_copied_from_neighbors():
    # zero all control data except corner 1: the surface goes second-order
    # flat against the far side, so its rim vertices flag degenerate there
    base = np.zeros((5, 2, 2, 3))
    base[0, :, :, 2] = 1.0
    net = ControlNet(5, 3, np.zeros(3), base)
    dm = tessellate_disk(DomainConfig(5), 3, 6)
    sm = sample_surface(net, dm)
    assert np.any(sm.degenerate) and not np.all(sm.degenerate)
    assert np.abs(np.linalg.norm(sm.normals, axis=1) - 1.0).max() <= 1e-9
    flagged = np.flatnonzero(sm.degenerate)
    good = np.flatnonzero(~sm.degenerate)
    for idx in flagged:
        d2 = np.sum((dm.vertices[good] - dm.vertices[idx]) ** 2, axis=1)
        assert np.array_equal(sm.normals[idx], sm.normals[good[int(np.argmin(d2))]])


def test_sampling_is_deterministic():
    net = demo_net(5, 3)
    dm = tessellate_disk(DomainConfig(5), 3, 4)
    a = sample_surface(net, dm)
    b = sample_surface(net, dm)
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.normals, b.normals)


class TestIsophote:
    def test_planar_patch_against_its_normal(self):
        net = demo_net(5, 3, height=0.0)
        dm = tessellate_disk(DomainConfig(5), 2, 4)
        sm = sample_surface(net, dm)
        s = isophote_scalar(sm, (0.0, 0.0, 1.0))
        assert np.abs(np.abs(s) - 1.0).max() <= 1e-9

    def test_planar_patch_in_plane_light(self):
        net = demo_net(5, 3, height=0.0)
        dm = tessellate_disk(DomainConfig(5), 2, 4)
        sm = sample_surface(net, dm)
        assert np.abs(isophote_scalar(sm, (1.0, 0.0, 0.0))).max() <= 1e-9

    def test_bounded_for_curved_nets(self):
        net = demo_net(6, 3)
        dm = tessellate_disk(DomainConfig(6), 2, 4)
        sm = sample_surface(net, dm)
        s = isophote_scalar(sm, (0.3, -0.5, 0.81))
        assert s.min() >= -1.0 and s.max() <= 1.0

    def test_rejects_zero_light(self):
        net = demo_net(5, 3)
        dm = tessellate_disk(DomainConfig(5), 1, 4)
        sm = sample_surface(net, dm)
        with pytest.raises(ValueError):
            isophote_scalar(sm, (0.0, 0.0, 0.0))

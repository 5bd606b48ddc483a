import numpy as np
import pytest

import orthoq


def brute_empty(pts, r):
    x_lo, x_hi, y_lo, y_hi = r
    m = (pts[:, 0] >= x_lo) & (pts[:, 0] < x_hi) & (pts[:, 1] >= y_lo) & (pts[:, 1] < y_hi)
    return not m.any()


def test_sample_points_shape_and_determinism():
    a = orthoq.sample_points(100, 3)
    b = orthoq.sample_points(100, 3)
    assert a.shape == (100, 2)
    assert np.array_equal(a, b)
    assert ((a >= 0) & (a < 1)).all()


def test_rank1d_matches_searchsorted():
    rng = np.random.default_rng(5)
    v = rng.random(500)
    r = orthoq.Rank1D(v.tolist())
    xs = rng.random(2000)
    expect = np.searchsorted(np.sort(v), xs, side="right")
    assert np.array_equal(r.ranks(xs), expect)
    assert len(r) == 500


def test_rank_space_is_permutation():
    pts = orthoq.sample_points(64, 1)
    p = orthoq.to_rank_space(pts)
    assert sorted(p) == list(range(1, 65))


def test_slabtree_exhaustive_small():
    p = orthoq.to_rank_space(orthoq.sample_points(12, 2))
    t = orthoq.SlabTree(p, 0.5)
    for i1 in range(0, 13):
        for i2 in range(i1, 13):
            for j1 in range(0, 13):
                for j2 in range(j1, 13):
                    want = not any(i1 < i <= i2 and j1 < p[i - 1] <= j2 for i in range(1, 13))
                    assert t.empty(i1, i2, j1, j2) == want


def test_quadrant_store_orientations():
    q = orthoq.QuadrantStore([2, 1, 3])
    assert len(q) == 3
    with pytest.raises(ValueError):
        q.empty("sideways", 1, 1)


@pytest.mark.parametrize("backend", ["main1", "main2"])
def test_grid_forest_agrees_with_brute_force(backend):
    pts = orthoq.sample_points(4096, 11)
    f = orthoq.GridForest(pts, backend=backend)
    rng = np.random.default_rng(9)
    for _ in range(3000):
        w, h = rng.random(2) ** 3
        x, y = rng.random(2)
        r = (x, min(1.0, x + w), y, min(1.0, y + h))
        assert f.empty(r) == brute_empty(pts, r)
    s = f.query_stats((0.1, 0.1001, 0.2, 0.2001))
    assert s["cells"] <= 6
    assert f.params["n"] == 4096
    assert f.bytes > 0


def test_range_tree_cell():
    pts = orthoq.sample_points(300, 4)
    t = orthoq.RangeTree(pts)
    assert t.empty((0.0, 1.0, 0.0, 1.0)) is False
    assert t.empty((0.5, 0.5, 0.0, 1.0)) is True


def test_validate_net_and_verify_report():
    pts = orthoq.sample_points(2048, 1)
    net = orthoq.validate_net(pts, 32.0, 500, 2)
    assert net["empty_rects"] == 0
    rep = orthoq.verify("main2", 2048, queries=2000)
    assert rep["mismatches"]["false_empty"] == 0
    assert rep["ok"]
    assert rep["queries"] == 2000


def test_bad_points_rejected():
    with pytest.raises(ValueError):
        orthoq.GridForest(np.zeros((4, 3)))

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import components, fixture_stats, grid_labels, hoof_stats as stats, same_partition
from rshc.hoof import bin_index
from rshc.motion import FlowTrackSet
from rshc.refine import (SuperpixelStats, UnionFind, attach_stats, build_adjacency,
                         merge_criterion, merge_refine, merge_stats)
from rshc.superpixels import build_map

B, T = 30, 3


def test_adjacency_grid():
    g = build_adjacency(grid_labels())
    assert g[4] == {0, 1, 2, 3, 5, 6, 7, 8}
    assert g[0] == {1, 3, 4}
    assert g[8] == {4, 5, 7}
    for i, nbrs in enumerate(g):
        assert i not in nbrs
        assert all(i in g[j] for j in nbrs)


def test_adjacency_split_and_single():
    labels = np.zeros((5, 8), dtype=int)
    labels[:, 4:] = 1
    assert build_adjacency(labels) == [{1}, {0}]
    assert build_adjacency(np.zeros((4, 4), dtype=int)) == [set()]


def _tracks(points, angle, magnitude, valid=None):
    n = len(points)
    valid = np.ones((n, T), bool) if valid is None else valid
    positions = np.repeat(np.asarray(points, float)[:, None, :], T + 1, axis=1)
    return FlowTrackSet(angle=np.full((n, T), angle), magnitude=np.full((n, T), magnitude),
                        valid=valid, positions=positions)


def test_attach_stats_single_point():
    labels = np.zeros((10, 20), dtype=int)
    labels[:, 10:] = 1
    spmap = build_map(np.zeros((10, 20, 3)), labels)
    st_ = attach_stats(spmap, _tracks([[3.0, 4.0]], 0.0, 3.0), B)
    expected = np.zeros((T, B))
    expected[:, bin_index(0.0, B)] = 3.0
    np.testing.assert_array_equal(st_[0].hoof, expected)
    assert st_[0].point_count == 1
    assert st_[1].point_count == 0
    assert st_[1].hoof.sum() == 0
    assert st_[0].pixel_count == 100


def test_attach_stats_partitions_points(rng):
    labels = grid_labels()
    spmap = build_map(rng.random((30, 30, 3)), labels)
    pts = rng.uniform(0, 29, (40, 2))
    st_ = attach_stats(spmap, _tracks(pts, 1.0, 2.0), B)
    assert sum(s.point_count for s in st_) == 40
    assert sum(s.mass for s in st_) == pytest.approx(40 * T * 2.0)


def test_attach_stats_skips_invalid_steps():
    spmap = build_map(np.zeros((10, 10, 3)), np.zeros((10, 10), dtype=int))
    valid = np.array([[True, False, False]])
    st_ = attach_stats(spmap, _tracks([[5.0, 5.0]], 0.5, 1.0, valid), B)
    assert st_[0].hoof[0].sum() == 1.0
    assert st_[0].hoof[1:].sum() == 0.0


def test_merge_stats_examples():
    a = stats((10, 0, 0), {3: 1.0})
    b = stats((20, 0, 0))
    m = merge_stats(a, b)
    np.testing.assert_array_equal(m.hoof, a.hoof)
    np.testing.assert_allclose(m.mean_color, [15, 0, 0])
    assert m.pixel_count == 200 and m.point_count == 2
    m = merge_stats(stats((0, 0, 0), pixels=1), stats((4, 0, 0), pixels=3))
    np.testing.assert_allclose(m.mean_color, [3, 0, 0])


@pytest.mark.parametrize("T_h, T_c, expected", [(1.0, 15.0, 1), (1.5, 15.0, 2), (2.0, 15.0, 3)])
def test_merge_matches_pairwise_components(T_h, T_c, expected):
    st_ = fixture_stats()
    graph = build_adjacency(grid_labels())
    edges = [(i, j) for i in range(9) for j in graph[i]
             if merge_criterion(st_[i], st_[j], T_h, T_c)[0]]
    oracle = components(9, edges)
    result = merge_refine(st_, graph, T_h, T_c)
    assert same_partition(result.cluster_of, oracle)
    assert result.num_clusters == expected == len(set(oracle))


def test_identical_superpixels_form_one_cluster():
    st_ = [stats((50, 5, 5), {2: 1.0}) for _ in range(9)]
    assert merge_refine(st_, build_adjacency(grid_labels())).num_clusters == 1


def test_two_distinct_halves():
    labels = np.zeros((10, 20), dtype=int)
    labels[:5, 10:], labels[5:, :10], labels[5:, 10:] = 1, 2, 3
    st_ = [stats((40, -30, 0), {0: 1.0}), stats((40, 40, 0), {15: 1.0}),
           stats((40, -30, 0), {0: 1.0}), stats((40, 40, 0), {15: 1.0})]
    res = merge_refine(st_, build_adjacency(labels))
    assert res.num_clusters == 2
    assert res.cluster_of[0] == res.cluster_of[2] != res.cluster_of[1] == res.cluster_of[3]


def test_motion_alone_merges_distinct_colors():
    labels = np.zeros((10, 20), dtype=int)
    labels[:, 10:] = 1
    st_ = [stats((50, 60, 0), {4: 2.0}), stats((50, -60, 0), {4: 5.0})]
    ok, d_h, d_c = merge_criterion(st_[0], st_[1])
    assert d_h == pytest.approx(np.sqrt(3)) and d_c > 15 and ok
    assert merge_refine(st_, build_adjacency(labels)).num_clusters == 1


def test_empty_hoof_falls_back_to_color():
    a, b = stats((50, 0, 0), {1: 1.0}), stats((50, 0, 0))
    ok, d_h, _ = merge_criterion(a, b)
    assert d_h == 0.0 and ok
    ok, _, _ = merge_criterion(a, stats((50, 40, 0)))
    assert not ok


def test_isolated_superpixels_get_singletons():
    st_ = [stats((0, 0, 0)), stats((0, 0, 0))]
    res = merge_refine(st_, [set(), set()])
    assert list(res.cluster_of) == [0, 1]


def test_conservation_and_compaction(rng):
    labels = grid_labels(4, 5, 6)
    n = 20
    st_ = [stats(rng.uniform(-40, 40, 3), {int(rng.integers(B)): float(rng.uniform(0.5, 2))},
                 pixels=int(rng.integers(20, 80))) for _ in range(n)]
    seen = []
    res = merge_refine(st_, build_adjacency(labels), on_merge=lambda a, b, m: seen.append((a, b, m)))
    for a, b, m in seen:
        assert m.mass == pytest.approx(a.mass + b.mass, abs=1e-9)
        assert m.pixel_count == a.pixel_count + b.pixel_count
    assert sum(s.pixel_count for s in res.cluster_stats) == sum(s.pixel_count for s in st_)
    assert sum(s.mass for s in res.cluster_stats) == pytest.approx(sum(s.mass for s in st_), abs=1e-9)
    assert sorted(set(res.cluster_of)) == list(range(res.num_clusters))
    assert 1 <= res.num_clusters <= n
    for c in range(res.num_clusters):
        members = np.nonzero(res.cluster_of == c)[0]
        assert res.cluster_stats[c].pixel_count == sum(st_[i].pixel_count for i in members)


def test_deterministic(rng):
    labels = grid_labels(4, 4, 5)
    st_ = [stats(rng.uniform(-20, 20, 3), {int(rng.integers(B)): 1.0}) for _ in range(16)]
    g = build_adjacency(labels)
    np.testing.assert_array_equal(merge_refine(st_, g).cluster_of, merge_refine(st_, g).cluster_of)


@given(st.integers(2, 30).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40))))
def test_union_find_matches_components(case):
    n, pairs = case
    uf = UnionFind(n)
    for a, b in pairs:
        uf.union(a, b)
    roots = [uf.find(i) for i in range(n)]
    assert roots == [uf.find(i) for i in range(n)]
    assert same_partition(roots, components(n, pairs))


def test_union_transitivity():
    uf = UnionFind(3)
    uf.union(0, 1)
    uf.union(1, 2)
    assert uf.find(0) == uf.find(1) == uf.find(2)

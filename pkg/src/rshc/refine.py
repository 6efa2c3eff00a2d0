"""Superpixel refinement: adjacency, per-superpixel cues, and the merge sweep."""

from dataclasses import dataclass, field

import numpy as np

from .color import color_distance
from .hoof import DEFAULT_BINS, build_hoof, normalize, series_similarity

DEFAULT_TH = 1.0
DEFAULT_TC = 15.0


@dataclass
class SuperpixelStats:
    hoof: np.ndarray          # (T_f, B) raw magnitude sums
    mean_color: np.ndarray    # (3,) weighted Lab
    pixel_count: int
    point_count: int = 0

    @property
    def hoof_series(self):
        return normalize(self.hoof)

    @property
    def mass(self):
        return float(self.hoof.sum())


def merge_stats(a, b):
    """Combine two regions: histograms add, colors average by pixel count."""
    if a.hoof.shape != b.hoof.shape:
        raise ValueError(f"HOOF series shape mismatch: {a.hoof.shape} vs {b.hoof.shape}")
    n = a.pixel_count + b.pixel_count
    color = (a.pixel_count * np.asarray(a.mean_color, dtype=np.float64)
             + b.pixel_count * np.asarray(b.mean_color, dtype=np.float64)) / n
    return SuperpixelStats(hoof=a.hoof + b.hoof, mean_color=color, pixel_count=n,
                           point_count=a.point_count + b.point_count)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        """Join the sets of ``a`` and ``b``; return the surviving root."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if (self.size[ra], -ra) < (self.size[rb], -rb):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


def build_adjacency(labels):
    """Neighbour sets of every superpixel under pixel 8-connectivity."""
    labels = np.asarray(labels)
    n = int(labels.max()) + 1
    pairs = []
    for a, b in ((labels[:, :-1], labels[:, 1:]),
                 (labels[:-1, :], labels[1:, :]),
                 (labels[:-1, :-1], labels[1:, 1:]),
                 (labels[:-1, 1:], labels[1:, :-1])):
        diff = a != b
        pairs.append(np.stack([a[diff], b[diff]], axis=1))
    graph = [set() for _ in range(n)]
    for i, j in np.unique(np.concatenate(pairs), axis=0).tolist():
        graph[i].add(j)
        graph[j].add(i)
    return graph


def attach_stats(spmap, tracks, B=DEFAULT_BINS):
    """HOOF series, mean color and counts for every superpixel.

    Each point's flow is credited to the superpixel holding its detection
    position; invalid steps contribute nothing.
    """
    T_f = tracks.T_f
    owner = spmap.label_at(tracks.positions[:, 0]) if tracks.n_points else np.empty(0, int)
    hoofs = np.zeros((spmap.count, T_f, B))
    for sp in np.unique(owner):
        sel = owner == sp
        for t in range(T_f):
            ok = tracks.valid[sel, t]
            hoofs[sp, t] = build_hoof(tracks.angle[sel, t][ok], tracks.magnitude[sel, t][ok], B)
    points = np.bincount(owner, minlength=spmap.count)
    return [SuperpixelStats(hoof=hoofs[i], mean_color=np.array(spmap.mean_color[i], dtype=np.float64),
                            pixel_count=int(spmap.pixel_count[i]), point_count=int(points[i]))
            for i in range(spmap.count)]


def merge_criterion(a, b, T_h=DEFAULT_TH, T_c=DEFAULT_TC):
    """Return ``(merge, D_h, D_c)``; merge when motion OR color agree."""
    d_h = series_similarity(a.hoof_series, b.hoof_series)
    d_c = float(color_distance(a.mean_color, b.mean_color))
    return (d_h > T_h or d_c < T_c), d_h, d_c


@dataclass
class ClusterLabeling:
    cluster_of: np.ndarray                 # superpixel id -> compact cluster id
    cluster_stats: list                    # cluster id -> merged SuperpixelStats
    merges: list = field(default_factory=list)   # (sp_i, sp_j, D_h, D_c) per union

    @property
    def num_clusters(self):
        return len(self.cluster_stats)

    def pixel_labels(self, labels):
        return self.cluster_of[labels]


def merge_refine(stats, graph, T_h=DEFAULT_TH, T_c=DEFAULT_TC, on_merge=None):
    """Single ascending sweep over superpixels, uniting similar neighbours.

    Cues are compared between the current clusters of the two superpixels,
    so statistics merged earlier in the sweep take part in later decisions.
    ``on_merge(a, b, merged)`` is called after every union with the two
    pre-merge cluster stats and the result.
    """
    n = len(stats)
    uf = UnionFind(n)
    current = {i: s for i, s in enumerate(stats)}
    merges = []
    for i in range(n):
        for j in sorted(graph[i]):
            ri, rj = uf.find(i), uf.find(j)
            if ri == rj:
                continue
            ok, d_h, d_c = merge_criterion(current[ri], current[rj], T_h, T_c)
            if not ok:
                continue
            a, b = current.pop(ri), current.pop(rj)
            merged = merge_stats(a, b)
            current[uf.union(ri, rj)] = merged
            merges.append((i, j, d_h, d_c))
            if on_merge is not None:
                on_merge(a, b, merged)

    roots = [uf.find(i) for i in range(n)]
    compact = {}
    for r in roots:
        compact.setdefault(r, len(compact))
    cluster_of = np.array([compact[r] for r in roots], dtype=np.int64)
    cluster_stats = [current[r] for r in compact]
    return ClusterLabeling(cluster_of=cluster_of, cluster_stats=cluster_stats, merges=merges)

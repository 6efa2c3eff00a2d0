"""Centroid-rule correspondence and the point-set accuracy metrics.

Ground truth is a 2-D integer map where ``n >= 1`` marks object ``n`` and
0 marks void. Both metrics count feature points, not pixels.
"""

from dataclasses import dataclass

import numpy as np


class InvalidInputError(ValueError):
    pass


class UndefinedMetricError(ValueError):
    pass


@dataclass
class Correspondence:
    cluster_to_object: dict   # cluster id -> object id, or None when unassigned
    m_cl: dict                # object id -> frozenset of point ids
    m_ref: dict               # object id -> frozenset of point ids

    @property
    def objects(self):
        return sorted(self.m_ref)


def _pixel(gt, xy):
    h, w = gt.shape
    col = np.clip(np.rint(xy[..., 0]).astype(int), 0, w - 1)
    row = np.clip(np.rint(xy[..., 1]).astype(int), 0, h - 1)
    return gt[row, col]


def correspond(points, point_cluster, gt):
    """Map clusters of points to ground-truth objects.

    ``point_cluster[p]`` is the cluster of point ``p`` or -1 if the method
    left it unclustered. A cluster belongs to the object under the mean
    position of its points; clusters whose centroid falls on void map to
    nothing and their points count towards no object.
    """
    gt = np.asarray(gt)
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    point_cluster = np.asarray(point_cluster, dtype=np.int64)
    if len(points) != len(point_cluster):
        raise InvalidInputError("one cluster id is needed per point")
    h, w = gt.shape
    if len(points) and ((points < -0.5).any() or (points[:, 0] > w - 0.5).any()
                        or (points[:, 1] > h - 0.5).any()):
        raise InvalidInputError(f"points fall outside the {w}x{h} ground truth")
    n_objects = int(gt.max()) if gt.size else 0
    truth = _pixel(gt, points) if len(points) else np.empty(0, int)

    cluster_to_object = {}
    m_cl = {n: set() for n in range(1, n_objects + 1)}
    for c in np.unique(point_cluster[point_cluster >= 0]).tolist():
        members = np.nonzero(point_cluster == c)[0]
        obj = int(_pixel(gt, points[members].mean(axis=0)))
        cluster_to_object[c] = obj if obj > 0 else None
        if obj > 0:
            m_cl[obj].update(members.tolist())
    m_ref = {n: frozenset(np.nonzero(truth == n)[0].tolist()) for n in range(1, n_objects + 1)}
    return Correspondence(cluster_to_object=cluster_to_object,
                          m_cl={n: frozenset(s) for n, s in m_cl.items()}, m_ref=m_ref)


def assign_clusters(labeling, points, spmap, gt):
    """Correspondence for a superpixel clustering: points inherit the
    cluster of the superpixel they were detected in."""
    gt = np.asarray(gt)
    if gt.shape != spmap.shape:
        raise InvalidInputError(
            f"ground truth shape {gt.shape} differs from label map {spmap.shape}")
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    clusters = labeling.cluster_of[spmap.label_at(points)] if len(points) else np.empty(0, int)
    return correspond(points, clusters, gt)


def _reference_size(corr):
    total = sum(len(s) for s in corr.m_ref.values())
    if total == 0:
        raise UndefinedMetricError("no reference points; the metric is undefined")
    return total


def spatial_accuracy(corr):
    """Symmetric-difference error summed over objects, relative to the reference size."""
    total = _reference_size(corr)
    return sum(len(corr.m_cl.get(n, frozenset()) ^ ref) for n, ref in corr.m_ref.items()) / total


def completeness(corr):
    """Fraction of reference points recovered by the matching clusters."""
    total = _reference_size(corr)
    return sum(len(corr.m_cl.get(n, frozenset()) & ref) for n, ref in corr.m_ref.items()) / total

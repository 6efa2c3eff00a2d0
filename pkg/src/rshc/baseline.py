"""K-Means clustering of feature points in an 8-D appearance/motion space.

Each point is described by its flow angle and magnitude, four local
weighted-L samples, and its position. This is the comparison method, so it
is kept deliberately plain: min-max scaling, k-means++ seeding, Lloyd
iterations.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_DIVISOR = 40.0


class InvalidParameterError(ValueError):
    pass


def minmax_scale(x):
    """Scale each column to [0, 1]; constant columns become 0."""
    x = np.asarray(x, dtype=np.float64)
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    return np.divide(x - lo, span, out=np.zeros_like(x), where=span > 0)


def extract_8d(points, tracks, image, scale=True):
    """Feature vectors for every point with at least one valid flow step.

    Returns ``(vectors, index)`` where ``index`` gives the point id of each
    row. Motion comes from the last valid step; colors are the weighted L
    of the 2x2 block at the rounded detection position.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    valid = tracks.valid
    index = np.nonzero(valid.any(axis=1))[0]
    if len(index) == 0:
        return np.empty((0, 8)), index
    last = valid.shape[1] - 1 - np.argmax(valid[index, ::-1], axis=1)
    theta = tracks.angle[index, last]
    mag = tracks.magnitude[index, last]
    xy = points[index]
    x0 = np.clip(np.rint(xy[:, 0]).astype(int), 0, max(w - 2, 0))
    y0 = np.clip(np.rint(xy[:, 1]).astype(int), 0, max(h - 2, 0))
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    L = image[..., 0]
    feats = np.column_stack([theta, mag, L[y0, x0], L[y0, x1], L[y1, x0], L[y1, x1],
                             xy[:, 0], xy[:, 1]])
    return (minmax_scale(feats) if scale else feats), index


def estimate_k(n_points, divisor=DEFAULT_DIVISOR):
    """Cluster count from the number of points, rounding half up, at least 1."""
    if n_points < 1 or divisor < 1:
        raise InvalidParameterError("need n_points >= 1 and divisor >= 1")
    return max(1, int(np.floor(n_points / divisor + 0.5)))


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    objective: list   # sum of squared distances after each assignment


def _kmeans_pp(x, K, rng):
    n = len(x)
    chosen = [int(rng.integers(n))]
    d2 = ((x - x[chosen[0]]) ** 2).sum(1)
    for _ in range(1, K):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(free))
        chosen.append(nxt)
        d2 = np.minimum(d2, ((x - x[nxt]) ** 2).sum(1))
    return x[chosen].copy()


def kmeans_8d(vectors, K, max_iters=100, seed=0):
    """Lloyd's algorithm with seeded k-means++ initialisation.

    Stops when assignments no longer change. An emptied cluster keeps its
    previous center.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if K < 1 or K > len(x):
        raise InvalidParameterError(f"K={K} must lie in [1, {len(x)}]")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp(x, K, rng)
    labels = None
    objective = []
    for _ in range(max_iters):
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(-1)
        new = np.argmin(d2, axis=1)
        objective.append(float(d2[np.arange(len(x)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for k in range(K):
            members = x[labels == k]
            if len(members):
                centers[k] = members.mean(axis=0)
    return KMeansResult(labels=labels, centers=centers, objective=objective)

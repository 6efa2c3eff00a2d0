"""SLIC superpixels over a weighted Lab image.

Images are ``(H, W, 3)`` float arrays in weighted Lab. Label maps are
``(H, W)`` integer arrays; positions are ``(x, y)`` with x along columns.
"""

import heapq
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

DEFAULT_K = 50
DEFAULT_NC = 10.0
DEFAULT_ITERATIONS = 10

_FOUR = ndimage.generate_binary_structure(2, 1)


class InvalidParameterError(ValueError):
    pass


@dataclass(frozen=True)
class SlicParams:
    K: int = DEFAULT_K
    N_c: float = DEFAULT_NC
    iterations: int = DEFAULT_ITERATIONS

    def validate(self, n_pixels):
        if self.K < 1:
            raise InvalidParameterError(f"K must be >= 1, got {self.K}")
        if self.K > n_pixels:
            raise InvalidParameterError(
                f"K={self.K} exceeds the pixel count {n_pixels}")
        if not self.N_c > 0:
            raise InvalidParameterError(f"N_c must be > 0, got {self.N_c}")
        if self.iterations < 1:
            raise InvalidParameterError(
                f"iterations must be >= 1, got {self.iterations}")


@dataclass
class SuperpixelMap:
    labels: np.ndarray        # (H, W) int, values in [0, count)
    count: int
    pixel_count: np.ndarray   # (count,)
    centroid: np.ndarray      # (count, 2) as (x, y)
    mean_color: np.ndarray    # (count, 3) weighted Lab

    @property
    def shape(self):
        return self.labels.shape

    def label_at(self, xy):
        """Superpixel id under each ``(x, y)`` position (rounded, clipped)."""
        xy = np.atleast_2d(np.asarray(xy, dtype=np.float64))
        h, w = self.labels.shape
        col = np.clip(np.rint(xy[:, 0]).astype(int), 0, w - 1)
        row = np.clip(np.rint(xy[:, 1]).astype(int), 0, h - 1)
        return self.labels[row, col]


def grid_step(n_pixels, K):
    return float(np.sqrt(n_pixels / K))


def _grid_shape(height, width, K):
    nx = max(1, int(round(np.sqrt(K * width / height))))
    ny = max(1, int(round(K / nx)))
    return min(ny, height), min(nx, width)


def lab_gradient(image):
    """Squared-difference gradient magnitude used to perturb seeds."""
    p = np.pad(np.asarray(image, dtype=np.float64), ((1, 1), (1, 1), (0, 0)), mode="edge")
    dx = p[1:-1, 2:] - p[1:-1, :-2]
    dy = p[2:, 1:-1] - p[:-2, 1:-1]
    return np.sum(dx * dx, axis=-1) + np.sum(dy * dy, axis=-1)


def seed_clusters(image, K):
    """Grid seeds, each moved to the lowest-gradient pixel of its 3x3 patch.

    Returns an ``(n, 2)`` int array of ``(x, y)`` positions. A seed only
    moves when a neighbour is strictly lower than the grid point; among
    equally low neighbours the first in row-major order wins.
    """
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape[:2]
    if K < 1 or K > h * w:
        raise InvalidParameterError(f"K={K} must lie in [1, {h * w}]")
    ny, nx = _grid_shape(h, w, K)
    grad = lab_gradient(image)
    seeds = []
    for j in range(ny):
        y = int((j + 0.5) * h / ny)
        for i in range(nx):
            x = int((i + 0.5) * w / nx)
            best, bx, by = grad[y, x], x, y
            for yy in range(max(y - 1, 0), min(y + 2, h)):
                for xx in range(max(x - 1, 0), min(x + 2, w)):
                    if grad[yy, xx] < best:
                        best, bx, by = grad[yy, xx], xx, yy
            seeds.append((bx, by))
    return np.array(seeds, dtype=int)


def _assign(image, centers, S, N_c):
    """One SLIC assignment pass restricted to 2S x 2S windows."""
    h, w = image.shape[:2]
    labels = np.full((h, w), -1, dtype=np.int64)
    best = np.full((h, w), np.inf)
    r = int(np.ceil(S))
    spatial = (N_c / S) ** 2
    for k, (cx, cy, L, a, b) in enumerate(centers):
        x0, x1 = max(int(cx) - r, 0), min(int(cx) + r + 1, w)
        y0, y1 = max(int(cy) - r, 0), min(int(cy) + r + 1, h)
        if x0 >= x1 or y0 >= y1:
            continue
        patch = image[y0:y1, x0:x1]
        dc = ((patch[..., 0] - L) ** 2 + (patch[..., 1] - a) ** 2
              + (patch[..., 2] - b) ** 2)
        ys, xs = np.ogrid[y0:y1, x0:x1]
        d = dc + ((xs - cx) ** 2 + (ys - cy) ** 2) * spatial
        win = best[y0:y1, x0:x1]
        closer = d < win
        win[closer] = d[closer]
        labels[y0:y1, x0:x1][closer] = k
    missing = labels < 0
    if missing.any():
        ys, xs = np.nonzero(missing)
        feats = image[ys, xs]
        dc = ((feats[:, None, :] - centers[None, :, 2:]) ** 2).sum(-1)
        ds = (xs[:, None] - centers[None, :, 0]) ** 2 + (ys[:, None] - centers[None, :, 1]) ** 2
        labels[ys, xs] = np.argmin(dc + ds * spatial, axis=1)
    return labels


def _update(image, labels, centers):
    h, w = labels.shape
    n = len(centers)
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=n).astype(np.float64)
    ys, xs = np.mgrid[0:h, 0:w]
    sums = np.stack([
        np.bincount(flat, weights=xs.ravel().astype(np.float64), minlength=n),
        np.bincount(flat, weights=ys.ravel().astype(np.float64), minlength=n),
        *(np.bincount(flat, weights=image[..., c].ravel(), minlength=n) for c in range(3)),
    ], axis=1)
    out = centers.copy()
    filled = counts > 0
    out[filled] = sums[filled] / counts[filled, None]
    return out


def _components(labels):
    """Split a label map into 4-connected components.

    Returns the component map and, per component, its source label.
    """
    comp = np.empty(labels.shape, dtype=np.int64)
    source = []
    offset = 0
    for lab in np.unique(labels):
        cc, n = ndimage.label(labels == lab, structure=_FOUR)
        sel = cc > 0
        comp[sel] = cc[sel] - 1 + offset
        source.extend([lab] * n)
        offset += n
    return comp, np.array(source)


def _boundary_lengths(comp):
    """Shared 4-neighbour edge counts between components, as a dict of dicts."""
    pairs = []
    for a, b in ((comp[:, :-1], comp[:, 1:]), (comp[:-1, :], comp[1:, :])):
        diff = a != b
        pairs.append(np.stack([a[diff], b[diff]], axis=1))
    pairs = np.concatenate(pairs)
    pairs.sort(axis=1)
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    border = {}
    for (i, j), c in zip(uniq.tolist(), counts.tolist()):
        border.setdefault(i, {})[j] = c
        border.setdefault(j, {})[i] = c
    return border


def enforce_connectivity(labels, min_size):
    """Make every superpixel a single 4-connected region of useful size.

    Components below ``min_size`` pixels join the neighbour with which they
    share the longest border. Stray fragments of a label (anything but its
    largest piece) join their largest neighbour. Output labels are compacted
    in row-major order of first appearance.
    """
    comp, source = _components(labels)
    n = len(source)
    size = np.bincount(comp.ravel(), minlength=n)
    largest = {}
    for c in range(n):
        lab = source[c]
        if lab not in largest or size[c] > size[largest[lab]]:
            largest[lab] = c
    stray = np.ones(n, dtype=bool)
    stray[list(largest.values())] = False
    border = _boundary_lengths(comp)
    size = size.tolist()
    parent = list(range(n))
    alive = set(range(n))

    def pick(c):
        nbrs = border.get(c, {})
        if not nbrs:
            return None
        if size[c] < min_size:
            return max(nbrs, key=lambda j: (nbrs[j], size[j], -j))
        return max(nbrs, key=lambda j: (size[j], -j))

    heap = [(size[c], c) for c in range(n) if stray[c] or size[c] < min_size]
    heapq.heapify(heap)
    while heap:
        sz, c = heapq.heappop(heap)
        if c not in alive or sz != size[c] or not (stray[c] or size[c] < min_size):
            continue
        t = pick(c)
        if t is None:
            continue
        parent[c] = t
        size[t] += size[c]
        stray[c] = False
        alive.discard(c)
        for j, cnt in border.pop(c).items():
            del border[j][c]
            if j != t:
                border[t][j] = border[t].get(j, 0) + cnt
                border[j][t] = border[j].get(t, 0) + cnt
        if stray[t] or size[t] < min_size:
            heapq.heappush(heap, (size[t], t))

    def root(c):
        while parent[c] != c:
            c = parent[c]
        return c

    roots = np.array([root(c) for c in range(n)])
    merged = roots[comp]
    _, first = np.unique(merged.ravel(), return_index=True)
    order = np.argsort(first)
    remap = np.empty(merged.max() + 1, dtype=np.int64)
    remap[np.unique(merged.ravel())[order]] = np.arange(len(order))
    return remap[merged]


def mean_colors(image, labels, count=None):
    """Per-superpixel component-wise mean of the weighted Lab image."""
    image = np.asarray(image, dtype=np.float64)
    flat = np.asarray(labels).ravel()
    n = int(flat.max()) + 1 if count is None else count
    counts = np.bincount(flat, minlength=n).astype(np.float64)
    sums = np.stack(
        [np.bincount(flat, weights=image[..., c].ravel(), minlength=n) for c in range(3)],
        axis=1)
    return sums / np.maximum(counts, 1.0)[:, None]


def build_map(image, labels):
    """Wrap a label map with its per-superpixel statistics."""
    labels = np.asarray(labels, dtype=np.int64)
    count = int(labels.max()) + 1
    h, w = labels.shape
    flat = labels.ravel()
    pixels = np.bincount(flat, minlength=count)
    ys, xs = np.mgrid[0:h, 0:w]
    cx = np.bincount(flat, weights=xs.ravel().astype(np.float64), minlength=count)
    cy = np.bincount(flat, weights=ys.ravel().astype(np.float64), minlength=count)
    centroid = np.stack([cx, cy], axis=1) / np.maximum(pixels, 1)[:, None]
    return SuperpixelMap(labels=labels, count=count, pixel_count=pixels,
                         centroid=centroid, mean_color=mean_colors(image, labels, count))


def slic_segment(image, params=SlicParams()):
    """Segment a weighted Lab image into superpixels.

    Distance is ``sqrt(d_lab**2 + (d_xy / S)**2 * N_c**2)`` with grid step
    ``S = sqrt(pixels / K)``; the search for each center is limited to a
    2S x 2S window.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] != 3 or image.size == 0:
        raise InvalidParameterError(f"expected a non-empty (H, W, 3) image, got {image.shape}")
    h, w = image.shape[:2]
    params.validate(h * w)
    S = grid_step(h * w, params.K)
    seeds = seed_clusters(image, params.K)
    centers = np.column_stack([
        seeds.astype(np.float64), image[seeds[:, 1], seeds[:, 0]]])
    for _ in range(params.iterations):
        labels = _assign(image, centers, S, params.N_c)
        centers = _update(image, labels, centers)
    labels = enforce_connectivity(labels, min_size=max(1, int(S * S / 4)))
    return build_map(image, labels)

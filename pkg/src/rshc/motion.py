"""Salient point detection and pyramidal Lucas-Kanade tracking.

Intensity images are 2-D float arrays in [0, 1] (the unweighted L channel
divided by 100). Points are ``(P, 2)`` float arrays of ``(x, y)``; a
point's id is its row index.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage


# Converts a min eigenvalue of the [0, 1]-intensity gradient tensor to the
# customary units (8-bit intensities, Scharr-scaled gradients over 2**20),
# so that the usual 1e-4 degeneracy threshold keeps its usual meaning.
EIGEN_UNITS = 255.0 ** 2 / 1024.0


class InvalidInputError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorConfig:
    max_points: int = 1000
    quality_threshold: float = 0.01
    min_spacing: float = 5.0
    window_sigma: float = 1.5

    def __post_init__(self):
        if self.max_points < 1:
            raise ValueError("max_points must be >= 1")
        if not 0.0 < self.quality_threshold <= 1.0:
            raise ValueError("quality_threshold must lie in (0, 1]")


@dataclass(frozen=True)
class LKConfig:
    levels: int = 3
    radius: int = 10
    max_iterations: int = 30
    epsilon: float = 0.01
    min_eigenvalue: float = 1e-4
    # mean absolute residual over the window, relative to the patch's own
    # standard deviation, so the bound does not depend on texture contrast
    max_residual: float = 0.3


@dataclass
class FlowTrackSet:
    """Per point and step: flow angle, magnitude and validity.

    ``positions[:, t]`` is the tracked location after ``t`` steps, so
    ``positions[:, 0]`` holds the detections.
    """
    angle: np.ndarray       # (P, T_f), radians in (-pi, pi]
    magnitude: np.ndarray   # (P, T_f)
    valid: np.ndarray       # (P, T_f) bool
    positions: np.ndarray   # (P, T_f + 1, 2)

    @property
    def n_points(self):
        return self.angle.shape[0]

    @property
    def T_f(self):
        return self.angle.shape[1]

    def displacement(self):
        """Rebuild ``(dx, dy)`` per step from angle and magnitude."""
        return np.stack([self.magnitude * np.cos(self.angle),
                         self.magnitude * np.sin(self.angle)], axis=-1)


def _intensity(frame):
    frame = np.asarray(frame, dtype=np.float64)
    return frame[..., 0] if frame.ndim == 3 else frame


def saliency_map(frame, sigma=1.5):
    """Minimum eigenvalue of the Gaussian-windowed structure tensor."""
    img = _intensity(frame)
    gy, gx = np.gradient(img)
    sxx = ndimage.gaussian_filter(gx * gx, sigma)
    syy = ndimage.gaussian_filter(gy * gy, sigma)
    sxy = ndimage.gaussian_filter(gx * gy, sigma)
    half_tr = 0.5 * (sxx + syy)
    disc = np.sqrt(np.maximum(0.25 * (sxx - syy) ** 2 + sxy * sxy, 0.0))
    return np.maximum(half_tr - disc, 0.0)


def detect_salient_points(frame, cfg=DetectorConfig()):
    """Shi-Tomasi style detector with greedy non-maximum suppression.

    Stand-in for the dither-pattern feature: anything that maps a frame to
    scored points can replace it. Results are ordered by descending score,
    ties broken by row-major position.
    """
    score = saliency_map(frame, cfg.window_sigma)
    if score.size == 0:
        raise InvalidInputError("empty frame")
    top = score.max()
    if top <= 1e-12:
        return np.empty((0, 2))
    peaks = (score == ndimage.maximum_filter(score, size=3, mode="constant"))
    peaks &= score >= cfg.quality_threshold * top
    ys, xs = np.nonzero(peaks)
    s = score[ys, xs]
    order = np.lexsort((xs, ys, -s))
    ys, xs = ys[order], xs[order]

    h, w = score.shape
    spacing = float(cfg.min_spacing)
    cell = max(spacing, 1.0)
    grid = {}
    kept = []
    for x, y in zip(xs.tolist(), ys.tolist()):
        gx, gy = int(x // cell), int(y // cell)
        ok = True
        for nx in (gx - 1, gx, gx + 1):
            for ny in (gy - 1, gy, gy + 1):
                for px, py in grid.get((nx, ny), ()):
                    if (px - x) ** 2 + (py - y) ** 2 < spacing * spacing:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            grid.setdefault((gx, gy), []).append((x, y))
            kept.append((x, y))
            if len(kept) == cfg.max_points:
                break
    return np.array(kept, dtype=np.float64).reshape(-1, 2)


def build_pyramid(img, levels):
    pyr = [np.asarray(img, dtype=np.float64)]
    for _ in range(1, levels):
        prev = pyr[-1]
        if min(prev.shape) < 8:
            break
        pyr.append(ndimage.gaussian_filter(prev, 1.0)[::2, ::2])
    return pyr


def _sample(img, x, y):
    return ndimage.map_coordinates(img, [y, x], order=1, mode="nearest")


def _lk_step(prev, curr, pts, cfg):
    """Track ``pts`` from ``prev`` to ``curr``; return displacement and status."""
    pyr_i = build_pyramid(prev, cfg.levels)
    pyr_j = build_pyramid(curr, cfg.levels)
    n = len(pts)
    r = cfg.radius
    off = np.arange(-r, r + 1, dtype=np.float64)
    oy, ox = np.meshgrid(off, off, indexing="ij")
    ox, oy = ox.ravel(), oy.ravel()
    area = ox.size

    guess = np.zeros((n, 2))
    d = np.zeros((n, 2))
    min_eig = np.zeros(n)
    for level in range(len(pyr_i) - 1, -1, -1):
        scale = 2.0 ** level
        img_i, img_j = pyr_i[level], pyr_j[level]
        gy, gx = np.gradient(img_i)
        p = pts / scale
        xi = p[:, :1] + ox
        yi = p[:, 1:] + oy
        patch_i = _sample(img_i, xi, yi)
        ix = _sample(gx, xi, yi)
        iy = _sample(gy, xi, yi)
        gxx = (ix * ix).sum(1)
        gyy = (iy * iy).sum(1)
        gxy = (ix * iy).sum(1)
        det = gxx * gyy - gxy * gxy
        tr = 0.5 * (gxx + gyy)
        min_eig = (tr - np.sqrt(np.maximum(tr * tr - det, 0.0))) * EIGEN_UNITS / area
        solvable = (det > 1e-12) & (min_eig >= cfg.min_eigenvalue / 4.0 ** level)
        d[:] = 0.0
        active = solvable.copy()
        for _ in range(cfg.max_iterations):
            if not active.any():
                break
            idx = np.nonzero(active)[0]
            shift = guess[idx] + d[idx]
            patch_j = _sample(img_j, xi[idx] + shift[:, :1], yi[idx] + shift[:, 1:])
            diff = patch_i[idx] - patch_j
            bx = (diff * ix[idx]).sum(1)
            by = (diff * iy[idx]).sum(1)
            dd = det[idx]
            step = np.stack([(gyy[idx] * bx - gxy[idx] * by) / dd,
                             (gxx[idx] * by - gxy[idx] * bx) / dd], axis=1)
            d[idx] += step
            active[idx] = np.hypot(step[:, 0], step[:, 1]) >= cfg.epsilon
        if level > 0:
            guess = 2.0 * (guess + d)
    flow = guess + d

    h, w = prev.shape
    shift = flow
    patch_i = _sample(prev, pts[:, :1] + ox, pts[:, 1:] + oy)
    patch_j = _sample(curr, pts[:, :1] + ox + shift[:, :1], pts[:, 1:] + oy + shift[:, 1:])
    residual = np.abs(patch_i - patch_j).mean(1) / np.maximum(patch_i.std(1), 1e-6)
    new = pts + flow
    inside = ((new[:, 0] >= 0) & (new[:, 0] <= w - 1)
              & (new[:, 1] >= 0) & (new[:, 1] <= h - 1))
    ok = (inside & (min_eig >= cfg.min_eigenvalue) & (residual <= cfg.max_residual)
          & np.isfinite(flow).all(1))
    return flow, ok


def track_flow(frames, points, cfg=LKConfig()):
    """Track points through ``len(frames) - 1`` steps.

    A track that is lost (leaves the frame, sits on a degenerate patch, or
    exceeds the residual bound) stays invalid for the rest of the window.
    """
    frames = [_intensity(f) for f in frames]
    if len(frames) < 2:
        raise InvalidInputError("need at least two frames to track")
    shape = frames[0].shape
    for i, f in enumerate(frames):
        if f.shape != shape:
            raise InvalidInputError(
                f"frame {i} has shape {f.shape}, expected {shape}")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n, steps = len(pts), len(frames) - 1
    angle = np.zeros((n, steps))
    magnitude = np.zeros((n, steps))
    valid = np.zeros((n, steps), dtype=bool)
    positions = np.zeros((n, steps + 1, 2))
    positions[:, 0] = pts
    alive = np.ones(n, dtype=bool)
    cur = pts.copy()
    for t in range(steps):
        idx = np.nonzero(alive)[0]
        if len(idx):
            flow, ok = _lk_step(frames[t], frames[t + 1], cur[idx], cfg)
            good = idx[ok]
            theta = np.arctan2(flow[ok, 1], flow[ok, 0])
            angle[good, t] = np.where(theta <= -np.pi, np.pi, theta)
            magnitude[good, t] = np.hypot(flow[ok, 0], flow[ok, 1])
            valid[good, t] = True
            cur[good] += flow[ok]
            alive[idx[~ok]] = False
        positions[:, t + 1] = cur
    return FlowTrackSet(angle=angle, magnitude=magnitude, valid=valid, positions=positions)

"""Synthetic ground-truthed scenes: a panning textured background with
rigid textured rectangles moving over it."""

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import ndimage


class SceneError(ValueError):
    pass


@dataclass
class Rectangle:
    x: int
    y: int
    width: int
    height: int
    color: tuple = (200, 60, 60)
    motion: tuple = (0.0, 0.0)
    texture: float = 40.0


@dataclass
class SceneSpec:
    width: int = 320
    height: int = 240
    frames: int = 4
    background_color: tuple = (90, 140, 90)
    background_motion: tuple = (0.0, 0.0)
    background_texture: float = 40.0
    texture_scale: float = 2.0
    noise: float = 0.0
    rectangles: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["rectangles"] = [Rectangle(**r) for r in d.get("rectangles", [])]
        return cls(**d)


def default_scene():
    """The two-rectangle panning scene used throughout the tests and demos."""
    return SceneSpec(
        background_motion=(-1.0, 0.0),
        rectangles=[
            Rectangle(x=30, y=30, width=90, height=70, color=(210, 50, 50), motion=(3.0, 0.0)),
            Rectangle(x=210, y=120, width=80, height=80, color=(50, 70, 220), motion=(0.0, 3.0)),
        ],
    )


def _texture(rng, shape, scale):
    t = ndimage.gaussian_filter(rng.standard_normal(shape), scale)
    return t / max(np.abs(t).max(), 1e-12)


def _offset(motion, t):
    return int(round(motion[0] * t)), int(round(motion[1] * t))


def generate_scene(spec, seed=0):
    """Render ``spec.frames`` RGB frames and matching ground-truth id maps.

    Frames are ``(H, W, 3)`` uint8; ground truth is ``(H, W)`` uint8 with
    rectangle ``n`` (1-based, later ones on top) labelled ``n`` and 0
    elsewhere. Background pixels uncovered by the pan are filled with the
    plain background color.
    """
    h, w = spec.height, spec.width
    if len(spec.rectangles) > 255:
        raise SceneError("at most 255 rectangles fit an 8-bit id map")
    for n, r in enumerate(spec.rectangles, 1):
        for t in range(spec.frames):
            dx, dy = _offset(r.motion, t)
            if (r.x + dx < 0 or r.y + dy < 0 or r.x + dx + r.width > w
                    or r.y + dy + r.height > h):
                raise SceneError(f"rectangle {n} leaves the frame at frame {t}")
    rng = np.random.default_rng(seed)
    bg_color = np.asarray(spec.background_color, dtype=np.float64)
    canvas = bg_color + spec.background_texture * _texture(rng, (h, w), spec.texture_scale)[..., None]
    patches = [np.asarray(r.color, dtype=np.float64)
               + r.texture * _texture(rng, (r.height, r.width), spec.texture_scale)[..., None]
               for r in spec.rectangles]

    frames, truths = [], []
    for t in range(spec.frames):
        dx, dy = _offset(spec.background_motion, t)
        img = np.empty((h, w, 3))
        img[:] = bg_color
        src = canvas[max(-dy, 0):h - max(dy, 0), max(-dx, 0):w - max(dx, 0)]
        img[max(dy, 0):max(dy, 0) + src.shape[0], max(dx, 0):max(dx, 0) + src.shape[1]] = src
        gt = np.zeros((h, w), dtype=np.uint8)
        for n, (r, patch) in enumerate(zip(spec.rectangles, patches), 1):
            ox, oy = _offset(r.motion, t)
            img[r.y + oy:r.y + oy + r.height, r.x + ox:r.x + ox + r.width] = patch
            gt[r.y + oy:r.y + oy + r.height, r.x + ox:r.x + ox + r.width] = n
        if spec.noise > 0:
            img += spec.noise * rng.standard_normal(img.shape)
        frames.append(np.clip(np.rint(img), 0, 255).astype(np.uint8))
        truths.append(gt)
    return frames, truths

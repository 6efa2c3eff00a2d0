"""sRGB to weighted CIELAB conversion and the mean-color distance."""

import numpy as np

# sRGB primaries, D65 reference white
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
D65_WHITE = np.array([0.95047, 1.0, 1.08883])

_EPS = (6.0 / 29.0) ** 3
_KAPPA = 3.0 * (6.0 / 29.0) ** 2

DEFAULT_M = 0.5


def srgb_to_linear(rgb):
    """Undo the sRGB transfer curve. Input in [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64)
    return np.where(rgb <= 0.04045, rgb / 12.92, ((rgb + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(rgb):
    """Convert 8-bit sRGB values (any shape ending in 3) to unweighted CIELAB."""
    rgb = np.asarray(rgb, dtype=np.float64) / 255.0
    xyz = srgb_to_linear(rgb) @ _RGB_TO_XYZ.T
    t = xyz / D65_WHITE
    f = np.where(t > _EPS, np.cbrt(t), t / _KAPPA + 4.0 / 29.0)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def weight_lab(lab, m=DEFAULT_M):
    """Scale the lightness channel by ``m``; a and b pass through."""
    if not 0.0 < m <= 1.0:
        raise ValueError(f"lightness weight m must lie in (0, 1], got {m}")
    out = np.array(lab, dtype=np.float64, copy=True)
    out[..., 0] *= m
    return out


def rgb_to_weighted_lab(rgb, m=DEFAULT_M):
    """8-bit sRGB pixel or image -> weighted Lab of the same leading shape.

    The result is what every downstream stage (SLIC, mean colors, color
    distance) consumes; the weighting is applied here once and never again.
    """
    return weight_lab(rgb_to_lab(rgb), m)


def lightness(rgb):
    """Unweighted L scaled to [0, 1]; the intensity image used for tracking."""
    return rgb_to_lab(rgb)[..., 0] / 100.0


def color_distance(c1, c2):
    """Euclidean distance between weighted Lab colors (broadcasts)."""
    d = np.asarray(c1, dtype=np.float64) - np.asarray(c2, dtype=np.float64)
    return np.sqrt(np.sum(d * d, axis=-1))

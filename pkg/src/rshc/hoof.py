"""Histograms of oriented optical flow and the kernels that compare them.

A histogram is a length-``B`` float array; a series is a ``(T_f, B)``
array with one histogram per tracked step. Raw histograms hold summed flow
magnitudes; normalized ones are discrete PDFs, except that an empty
histogram stays all zero.
"""

import numpy as np

DEFAULT_BINS = 30
MIN_MAGNITUDE = 1e-6

TWO_PI = 2.0 * np.pi


class InvalidInputError(ValueError):
    pass


def bin_edges(B):
    """Bin edges as fractions of a full turn."""
    return np.arange(B + 1) / B


def wrap_angle(theta):
    """Map angles in (-pi, pi] onto (0, 2*pi]."""
    theta = np.asarray(theta, dtype=np.float64)
    return np.where(theta <= 0.0, theta + TWO_PI, theta)


def bin_index(theta, B=DEFAULT_BINS):
    """Bin of each angle, with bins ``(i*2pi/B, (i+1)*2pi/B]``.

    Bins are closed on the right to match the (0, 2*pi] range, so an angle
    sitting exactly on an edge belongs to the lower bin: -pi (wrapped to
    pi) lands in bin ``B/2 - 1`` for even B, and 0 (wrapped to 2*pi) in
    bin ``B - 1``.
    """
    # compare in turns: theta/2pi is exact at pi and 2pi, i/B is correctly rounded
    turns = wrap_angle(theta) / TWO_PI
    idx = np.searchsorted(bin_edges(B), turns, side="left") - 1
    return np.clip(idx, 0, B - 1)


def build_hoof(angles, magnitudes, B=DEFAULT_BINS, min_magnitude=MIN_MAGNITUDE):
    """Raw HOOF: each vector adds its magnitude to the bin of its angle.

    Vectors at or below ``min_magnitude`` carry no usable direction and
    are skipped.
    """
    angles = np.asarray(angles, dtype=np.float64).ravel()
    magnitudes = np.asarray(magnitudes, dtype=np.float64).ravel()
    keep = magnitudes > min_magnitude
    if not keep.any():
        return np.zeros(B)
    return np.bincount(bin_index(angles[keep], B), weights=magnitudes[keep], minlength=B)


def normalize(h):
    """Divide by the total mass along the last axis; empty rows stay zero."""
    h = np.asarray(h, dtype=np.float64)
    total = h.sum(axis=-1, keepdims=True)
    return np.divide(h, total, out=np.zeros_like(h), where=total > 0)


def _check_pair(h1, h2):
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape[-1] != h2.shape[-1]:
        raise InvalidInputError(
            f"bin count mismatch: {h1.shape[-1]} vs {h2.shape[-1]}")
    return h1, h2


def bhattacharyya_coefficient(h1, h2):
    """``sum_i sqrt(h1_i * h2_i)`` over the last axis."""
    h1, h2 = _check_pair(h1, h2)
    return np.sqrt(h1 * h2).sum(axis=-1)


def bhattacharyya_distance(h1, h2):
    """``-ln`` of the coefficient; infinite for disjoint or empty histograms."""
    bc = bhattacharyya_coefficient(h1, h2)
    with np.errstate(divide="ignore"):
        return -np.log(bc)


def bhattacharyya_kernel(h1, h2):
    """RBF kernel on the Bhattacharyya distance, ``exp(-d_B)``, in [0, 1].

    Expects normalized histograms. An empty histogram is treated as
    maximally dissimilar to everything, itself included.
    """
    h1, h2 = _check_pair(h1, h2)
    k = np.exp(-bhattacharyya_distance(h1, h2))
    empty = (h1.sum(axis=-1) <= 0) | (h2.sum(axis=-1) <= 0)
    return np.clip(np.where(empty, 0.0, k), 0.0, 1.0)


def series_similarity(s1, s2):
    """Magnitude of the per-step kernel vector between two HOOF series.

    Both series are ``(T_f, B)`` and normalized; the result lies in
    ``[0, sqrt(T_f)]``.
    """
    s1, s2 = _check_pair(s1, s2)
    if s1.shape != s2.shape:
        raise InvalidInputError(f"series shape mismatch: {s1.shape} vs {s2.shape}")
    k = bhattacharyya_kernel(s1, s2)
    return float(np.sqrt(np.sum(k * k)))

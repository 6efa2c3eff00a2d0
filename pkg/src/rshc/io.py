"""Frame-sequence and ground-truth I/O plus result writing."""

import json
from pathlib import Path

import numpy as np
from PIL import Image

FRAME_SUFFIXES = {".png", ".ppm", ".pgm", ".pnm"}


class LoadError(IOError):
    pass


def _image_files(path):
    path = Path(path)
    if not path.is_dir():
        raise LoadError(f"{path} is not a directory")
    files = sorted(p for p in path.iterdir() if p.suffix.lower() in FRAME_SUFFIXES)
    if not files:
        raise LoadError(f"no PNG/PPM images found in {path}")
    return files


def _read(path, mode):
    try:
        with Image.open(path) as img:
            return np.array(img.convert(mode) if mode else img)
    except (OSError, ValueError) as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc


def _check_sizes(arrays, files):
    shape = arrays[0].shape[:2]
    for arr, f in zip(arrays, files):
        if arr.shape[:2] != shape:
            raise LoadError(
                f"{f.name} is {arr.shape[1]}x{arr.shape[0]}, expected {shape[1]}x{shape[0]}")


def load_frames(path):
    """Read a directory of frames, in lexicographic order, as RGB uint8 arrays."""
    files = _image_files(path)
    frames = [_read(f, "RGB") for f in files]
    _check_sizes(frames, files)
    return frames


def load_ground_truth(path):
    """Read 8-bit id maps (0 = void) in lexicographic order."""
    files = _image_files(path)
    maps = []
    for f in files:
        arr = _read(f, None)
        if arr.ndim == 3:
            arr = arr[..., 0]
        maps.append(arr.astype(np.uint8))
    _check_sizes(maps, files)
    return maps


def save_frames(frames, path, prefix="frame"):
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for i, f in enumerate(frames):
        Image.fromarray(np.asarray(f)).save(path / f"{prefix}_{i:04d}.png")


def boundary_overlay(frame, cluster_map, color=(255, 255, 0)):
    """Copy of ``frame`` with 1-px lines where neighbouring cluster ids differ."""
    out = np.array(frame, dtype=np.uint8, copy=True)
    edge = np.zeros(cluster_map.shape, dtype=bool)
    edge[:, 1:] |= cluster_map[:, 1:] != cluster_map[:, :-1]
    edge[1:, :] |= cluster_map[1:, :] != cluster_map[:-1, :]
    out[edge] = color
    return out


def write_label_map(cluster_map, path):
    Image.fromarray(np.asarray(cluster_map, dtype=np.uint16)).save(path)


def read_label_map(path):
    with Image.open(path) as img:
        return np.array(img).astype(np.int64)


def write_outputs(results, config, path, frames=None):
    """Write per-window label maps, overlays, the point file and the report.

    Layout::

        labels_0000.png    16-bit cluster id per pixel
        overlay_0000.png   cluster boundaries on the window's first frame
        points.json        detected points per window
        report.json        resolved config and per-window metrics
    """
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        windows, points = [], []
        for r in results:
            cmap = r.cluster_map
            write_label_map(cmap, path / f"labels_{r.window:04d}.png")
            if frames is not None:
                Image.fromarray(boundary_overlay(frames[r.frame], cmap)).save(
                    path / f"overlay_{r.window:04d}.png")
            entry = {"window": r.window, "frame": r.frame,
                     "num_superpixels": int(r.superpixels.count),
                     "num_points": int(len(r.points)),
                     "methods": r.metrics if r.metrics else
                     [{"method": "rshc", "num_clusters": r.labeling.num_clusters}]}
            windows.append(entry)
            points.append({"window": r.window, "frame": r.frame,
                           "points": np.asarray(r.points).tolist()})
        report = {"config": config.to_dict(), "windows": windows}
        (path / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
        (path / "points.json").write_text(json.dumps({"windows": points}, indent=2))
    except OSError as exc:
        raise IOError(f"failed writing results to {path}: {exc}") from exc
    return report


def read_report(path):
    return json.loads(Path(path).read_text())

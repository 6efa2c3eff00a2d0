"""End-to-end RSHC over non-overlapping windows of ``T_f + 1`` frames."""

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from . import baseline as kmeans_baseline
from .color import DEFAULT_M, rgb_to_lab, weight_lab
from .evaluation import assign_clusters, completeness, correspond, spatial_accuracy
from .hoof import DEFAULT_BINS
from .motion import DetectorConfig, FlowTrackSet, LKConfig, detect_salient_points, track_flow
from .refine import (DEFAULT_TC, DEFAULT_TH, ClusterLabeling, attach_stats,
                     build_adjacency, merge_refine)
from .superpixels import DEFAULT_ITERATIONS, SlicParams, SuperpixelMap, slic_segment


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    m: float = DEFAULT_M
    K: int = 50
    N_c: float = 10.0
    T_f: int = 3
    B: int = DEFAULT_BINS
    T_h: float = DEFAULT_TH
    T_c: float = DEFAULT_TC
    slic_iterations: int = DEFAULT_ITERATIONS
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    lk: LKConfig = field(default_factory=LKConfig)
    baseline: bool = False
    baseline_divisor: float = kmeans_baseline.DEFAULT_DIVISOR
    input: Optional[str] = None
    gt: Optional[str] = None
    output: Optional[str] = None
    seed: int = 0

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if "detector" in d:
            d["detector"] = DetectorConfig(**d["detector"])
        if "lk" in d:
            d["lk"] = LKConfig(**d["lk"])
        return cls(**d)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class WindowResult:
    window: int
    frame: int
    points: np.ndarray
    tracks: FlowTrackSet
    superpixels: SuperpixelMap
    labeling: ClusterLabeling
    stats: list
    baseline_clusters: Optional[np.ndarray] = None
    metrics: list = field(default_factory=list)

    @property
    def cluster_map(self):
        return self.labeling.pixel_labels(self.superpixels.labels)


def _metrics(method, corr, num_clusters):
    try:
        s_er, s_compl = spatial_accuracy(corr), completeness(corr)
    except ValueError:
        s_er = s_compl = None
    return {"method": method, "num_clusters": int(num_clusters), "s_er": s_er, "s_compl": s_compl}


def process_window(frames, config, gt=None, window=0, frame=0, on_merge=None):
    """Cluster one window. ``frames`` holds ``T_f + 1`` RGB uint8 images;
    ``gt`` (optional) is the id map of the first one."""
    labs = [rgb_to_lab(f) for f in frames]
    intensity = [lab[..., 0] / 100.0 for lab in labs]
    weighted = weight_lab(labs[0], config.m)

    points = detect_salient_points(intensity[0], config.detector)
    tracks = track_flow(intensity, points, config.lk)
    spmap = slic_segment(weighted, SlicParams(config.K, config.N_c, config.slic_iterations))
    stats = attach_stats(spmap, tracks, config.B)
    labeling = merge_refine(stats, build_adjacency(spmap.labels), config.T_h, config.T_c,
                            on_merge=on_merge)
    result = WindowResult(window=window, frame=frame, points=points, tracks=tracks,
                          superpixels=spmap, labeling=labeling, stats=stats)

    if config.baseline:
        clusters = np.full(len(points), -1, dtype=np.int64)
        vectors, index = kmeans_baseline.extract_8d(points, tracks, weighted)
        if len(index):
            k = kmeans_baseline.estimate_k(len(index), config.baseline_divisor)
            clusters[index] = kmeans_baseline.kmeans_8d(vectors, k, seed=config.seed).labels
        result.baseline_clusters = clusters

    if gt is not None:
        gt = np.asarray(gt)
        result.metrics.append(
            _metrics("rshc", assign_clusters(labeling, points, spmap, gt), labeling.num_clusters))
        if result.baseline_clusters is not None:
            bc = result.baseline_clusters
            n = len(np.unique(bc[bc >= 0]))
            result.metrics.append(_metrics("kmeans8d", correspond(points, bc, gt), n))
    return result


def run_frames(frames, config, truths=None, on_merge=None):
    """Run every complete window of ``frames``; windows do not overlap."""
    span = config.T_f + 1
    if len(frames) < span:
        raise PipelineError(f"need at least T_f + 1 = {span} frames, got {len(frames)}")
    shape = np.shape(frames[0])
    results = []
    for w, start in enumerate(range(0, len(frames) - config.T_f, config.T_f)):
        chunk = frames[start:start + span]
        if any(np.shape(f) != shape for f in chunk):
            raise PipelineError("all frames must share one size")
        gt = truths[start] if truths is not None else None
        results.append(process_window(chunk, config, gt, window=w, frame=start, on_merge=on_merge))
    return results


def run_pipeline(config):
    """Load frames (and ground truth) named in ``config`` and run them."""
    from .io import load_frames, load_ground_truth

    if not config.input:
        raise PipelineError("config.input is not set")
    frames = load_frames(config.input)
    truths = load_ground_truth(config.gt) if config.gt else None
    if truths is not None and len(truths) < len(frames) - config.T_f:
        raise PipelineError("ground truth has fewer maps than window start frames")
    return run_frames(frames, config, truths)

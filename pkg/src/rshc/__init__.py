"""Video object segmentation by refining SLIC superpixels with short-term
HOOF series and a mean-color cue."""

from .color import color_distance, rgb_to_lab, rgb_to_weighted_lab, weight_lab
from .hoof import (bhattacharyya_coefficient, bhattacharyya_distance, bhattacharyya_kernel,
                   bin_index, build_hoof, normalize, series_similarity)
from .motion import DetectorConfig, FlowTrackSet, LKConfig, detect_salient_points, track_flow
from .pipeline import PipelineConfig, process_window, run_frames, run_pipeline
from .refine import (ClusterLabeling, SuperpixelStats, UnionFind, attach_stats,
                     build_adjacency, merge_refine, merge_stats)
from .superpixels import SlicParams, SuperpixelMap, mean_colors, seed_clusters, slic_segment

__version__ = "0.1.0"

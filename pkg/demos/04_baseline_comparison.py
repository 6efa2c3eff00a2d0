# %% [markdown]
# # Against a k-means baseline
#
# The baseline clusters the tracked points directly on an 8-D feature
# (flow angle and magnitude, a 2x2 lightness patch, position), with K set
# from the number of points. It has no notion of regions, so it tends to
# split objects into many small groups.

# %%
import numpy as np

from rshc.pipeline import PipelineConfig, run_frames
from rshc.synth import default_scene, generate_scene

rows = []
for seed in range(5):
    frames, truths = generate_scene(default_scene(), seed=seed)
    result = run_frames(frames, PipelineConfig(baseline=True, seed=seed), truths)[0]
    rows.append({m["method"]: m for m in result.metrics})
    print(seed, "  ".join(f"{name}: k={m['num_clusters']:>2} s_er={m['s_er']:.3f} "
                          f"s_compl={m['s_compl']:.3f}" for name, m in rows[-1].items()))

# %%
for name in ("rshc", "kmeans8d"):
    c = np.array([r[name]["s_compl"] for r in rows])
    e = np.array([r[name]["s_er"] for r in rows])
    print(f"{name:>8}: completeness {c.mean():.3f} +/- {c.std():.3f}, error {e.mean():.3f} +/- {e.std():.3f}")

import numpy as np
import pytest

from rshc.synth import default_scene, generate_scene


@pytest.fixture(scope="session")
def scene():
    """Frames and ground truth of the default two-rectangle panning scene."""
    return generate_scene(default_scene(), seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_histograms(rng, n, B, sparsity=0.3):
    h = rng.random((n, B))
    h[rng.random((n, B)) < sparsity] = 0.0
    h[:, 0] += 1e-3
    return h / h.sum(axis=1, keepdims=True)


def translating_sequence(shape=(240, 320), step=(3, 0), n_frames=4, seed=0, sigma=2.0):
    """Smooth random texture whose content moves by ``step`` (dx, dy) per frame."""
    rng = np.random.default_rng(seed)
    h, w = shape
    pad = 4 * max(abs(step[0]), abs(step[1])) * n_frames + 8
    from scipy import ndimage
    big = ndimage.gaussian_filter(rng.random((h + 2 * pad, w + 2 * pad)), sigma)
    big = (big - big.min()) / (big.max() - big.min())
    frames = []
    for t in range(n_frames):
        dx, dy = step[0] * t, step[1] * t
        frames.append(big[pad - dy:pad - dy + h, pad - dx:pad - dx + w])
    return frames


def grid_labels(rows=3, cols=3, cell=10):
    return np.kron(np.arange(rows * cols).reshape(rows, cols), np.ones((cell, cell), dtype=int))


def components(n, edges):
    """Connected components by repeated relabelling (no union-find)."""
    comp = list(range(n))
    changed = True
    while changed:
        changed = False
        for i, j in edges:
            lo = min(comp[i], comp[j])
            if comp[i] != lo or comp[j] != lo:
                comp[i] = comp[j] = lo
                changed = True
    return comp


def same_partition(a, b):
    a, b = list(a), list(b)
    return all((a[i] == a[j]) == (b[i] == b[j]) for i in range(len(a)) for j in range(len(a)))


HOOF_BINS, HOOF_STEPS = 30, 3


def hoof_stats(color, bins=None, pixels=100, points=1):
    """Superpixel stats whose raw histogram repeats ``bins`` at every step."""
    from rshc.refine import SuperpixelStats
    hoof = np.zeros((HOOF_STEPS, HOOF_BINS))
    for b, w in (bins or {}).items():
        hoof[:, b] = w
    return SuperpixelStats(hoof=hoof, mean_color=np.array(color, dtype=float),
                           pixel_count=pixels, point_count=points)


# groups: A = top row, B = rows 1-2 left/middle, C = right column below the top
GROUP = {0: "A", 1: "A", 2: "A", 3: "B", 4: "B", 6: "B", 7: "B", 5: "C", 8: "C"}
FIXTURE = {
    "A": ((30.0, 0.0, 0.0), {0: 1.0}),
    "B": ((30.0, 60.0, 0.0), {0: 1.0}),
    "C": ((30.0, 0.0, 60.0), {0: 0.5, 7: 0.5}),
}


def fixture_stats():
    return [hoof_stats(*FIXTURE[GROUP[i]]) for i in range(9)]



# acceptance reporting: one line per criterion at the end of the run
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA[marker.args[0]] = (marker.args[1], report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcome, duration = _CRITERIA[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title} ({duration:.2f} s)")

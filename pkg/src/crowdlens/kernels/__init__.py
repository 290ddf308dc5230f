"""Pairwise frame kernels: compiled fast path with a NumPy fallback.

The Cython extension (``_ckernels``) is used when built; otherwise the NumPy
implementation takes over transparently. ``CROWDLENS_KERNEL=python`` or
``=cython`` forces a backend (the latter raises if the extension is missing).
"""

import os

import numpy as np

from . import _pykernels


def _select():
    forced = os.environ.get("CROWDLENS_KERNEL", "").lower()
    if forced in ("python", "numpy"):
        return _pykernels, "python"
    try:
        from . import _ckernels
    except ImportError:
        if forced == "cython":
            raise
        return _pykernels, "python"
    return _ckernels, "cython"


_impl, BACKEND = _select()


def load_backend(name: str):
    """Fetch a backend module by name ('python' or 'cython'); for benchmarks."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def scene_stats(xs, ys, speeds, headings, present, *,
                gamma, beta, w1, w2, pts, social_radius, alone_distance):
    """Per-frame collectivity, mean pairwise distance and neighbor counts.

    Inputs are dense (frames, pedestrians) float64 matrices plus a uint8
    presence mask; see ``_pykernels.scene_stats`` for the full contract.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    speeds = np.ascontiguousarray(speeds, dtype=np.float64)
    headings = np.ascontiguousarray(headings, dtype=np.float64)
    present = np.ascontiguousarray(present, dtype=np.uint8)
    return _impl.scene_stats(xs, ys, speeds, headings, present,
                             gamma, beta, w1, w2, pts, social_radius, alone_distance)


def frame_stats(xs, ys, speeds, headings, **params):
    """Single-frame convenience wrapper around ``scene_stats``."""
    to_row = lambda v: np.asarray(v, dtype=np.float64)[None, :]
    n = len(xs)
    present = np.ones((1, n), dtype=np.uint8)
    coll, mean_dist, neighbors = scene_stats(
        to_row(xs), to_row(ys), to_row(speeds), to_row(headings), present, **params
    )
    return coll[0], mean_dist[0], neighbors[0]

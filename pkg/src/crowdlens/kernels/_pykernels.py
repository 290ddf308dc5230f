"""NumPy implementation of the per-frame pairwise kernels.

Reference semantics for the compiled backend; used as the fallback when the
extension is not built.
"""

import numpy as np


def scene_stats(xs, ys, speeds, headings, present,
                gamma, beta, w1, w2, pts, social_radius, alone_distance):
    """Pairwise per-frame stats over a dense (frames, pedestrians) layout.

    ``present[f, p]`` marks pedestrian ``p`` as tracked at frame ``f``; all
    other matrix slots are ignored. Returns ``(collectivity, mean_dist,
    neighbors)`` matrices of the same shape. A pedestrian alone in a frame
    gets collectivity 0, the alone-distance sentinel, and 0 neighbors.
    """
    F, P = xs.shape
    coll = np.zeros((F, P), dtype=np.float64)
    mean_dist = np.zeros((F, P), dtype=np.float64)
    neighbors = np.zeros((F, P), dtype=np.int32)

    for f in range(F):
        idx = np.nonzero(present[f])[0]
        n = len(idx)
        if n == 0:
            continue
        if n == 1:
            mean_dist[f, idx[0]] = alone_distance
            continue
        x = xs[f, idx]
        y = ys[f, idx]
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        d = np.sqrt(dx * dx + dy * dy)

        sum_d = d.sum(axis=1)  # diagonal contributes 0
        mean_dist[f, idx] = sum_d / (n - 1)
        neighbors[f, idx] = (d <= social_radius).sum(axis=1) - 1  # drop self

        s = speeds[f, idx]
        h = headings[f, idx]
        ds = np.abs(s[:, None] - s[None, :]) / pts
        dh = np.abs(h[:, None] - h[None, :]) % 360.0
        dh = np.where(dh > 180.0, 360.0 - dh, dh)
        w = w1 * ds + w2 * (dh / 180.0)
        k = gamma * np.exp(-beta * w * w)
        np.fill_diagonal(k, 0.0)
        phi = k.sum(axis=1) / (n - 1)
        coll[f, idx] = np.clip(phi, 0.0, 1.0)

    return coll, mean_dist, neighbors

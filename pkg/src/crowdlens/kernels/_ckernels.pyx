# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frame pairwise kernels; mirrors _pykernels.scene_stats."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, fmod, sqrt

cnp.import_array()


def scene_stats(double[:, ::1] xs, double[:, ::1] ys,
                double[:, ::1] speeds, double[:, ::1] headings,
                cnp.uint8_t[:, ::1] present,
                double gamma, double beta, double w1, double w2,
                double pts, double social_radius, double alone_distance):
    cdef Py_ssize_t F = xs.shape[0]
    cdef Py_ssize_t P = xs.shape[1]

    coll_arr = np.zeros((F, P), dtype=np.float64)
    mean_dist_arr = np.zeros((F, P), dtype=np.float64)
    neighbors_arr = np.zeros((F, P), dtype=np.int32)
    cdef double[:, ::1] coll = coll_arr
    cdef double[:, ::1] mean_dist = mean_dist_arr
    cdef int[:, ::1] neighbors = neighbors_arr

    idx_arr = np.empty(P, dtype=np.intp)
    cdef Py_ssize_t[::1] idx = idx_arr

    cdef Py_ssize_t f, p, a, b, i, j, n
    cdef double dx, dy, d, ds, dh, w, ksum, dsum, phi
    cdef int nb

    for f in range(F):
        n = 0
        for p in range(P):
            if present[f, p]:
                idx[n] = p
                n += 1
        if n == 0:
            continue
        if n == 1:
            mean_dist[f, idx[0]] = alone_distance
            continue
        for a in range(n):
            i = idx[a]
            dsum = 0.0
            ksum = 0.0
            nb = 0
            for b in range(n):
                if b == a:
                    continue
                j = idx[b]
                dx = xs[f, i] - xs[f, j]
                dy = ys[f, i] - ys[f, j]
                d = sqrt(dx * dx + dy * dy)
                dsum += d
                if d <= social_radius:
                    nb += 1
                ds = fabs(speeds[f, i] - speeds[f, j]) / pts
                dh = fmod(fabs(headings[f, i] - headings[f, j]), 360.0)
                if dh > 180.0:
                    dh = 360.0 - dh
                w = w1 * ds + w2 * (dh / 180.0)
                ksum += gamma * exp(-beta * w * w)
            mean_dist[f, i] = dsum / (n - 1)
            neighbors[f, i] = nb
            phi = ksum / (n - 1)
            if phi < 0.0:
                phi = 0.0
            elif phi > 1.0:
                phi = 1.0
            coll[f, i] = phi

    return coll_arr, mean_dist_arr, neighbors_arr

"""Numba-compiled pixel-scan kernels (the fast path).

Same contracts and integer results as kernels._numpy; only the loop
execution differs. Compiled lazily on first call, cached on disk. The
direction unrolling below follows directions.OFFSET_X/OFFSET_Y: bit d
is 45*d degrees counter-clockwise from East, with y growing downward.
"""

import numpy as np
from numba import njit

from ..directions import OFFSET_X, OFFSET_Y

NAME = "numba"

_OFF_X = np.ascontiguousarray(OFFSET_X)
_OFF_Y = np.ascontiguousarray(OFFSET_Y)


def _padded(edge):
    """Edge map with a False rim so neighbor reads need no bounds checks."""
    h, w = edge.shape
    out = np.zeros((h + 2, w + 2), dtype=np.bool_)
    out[1:-1, 1:-1] = edge
    return out


@njit(cache=True, nogil=True)
def _edm1_scan(padded):
    h, w = padded.shape
    center = 0
    c0 = c1 = c2 = c3 = c4 = c5 = c6 = c7 = 0
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            if padded[y, x]:
                center += 1
                c0 += padded[y, x + 1]
                c1 += padded[y - 1, x + 1]
                c2 += padded[y - 1, x]
                c3 += padded[y - 1, x - 1]
                c4 += padded[y, x - 1]
                c5 += padded[y + 1, x - 1]
                c6 += padded[y + 1, x]
                c7 += padded[y + 1, x + 1]
    counts = np.empty(8, dtype=np.int64)
    counts[0] = c0
    counts[1] = c1
    counts[2] = c2
    counts[3] = c3
    counts[4] = c4
    counts[5] = c5
    counts[6] = c6
    counts[7] = c7
    return center, counts


def edm1_counts(edge):
    center, counts = _edm1_scan(_padded(edge))
    return int(center), counts


@njit(cache=True, nogil=True)
def _edm2_scan(padded, priority, prio_dx, prio_dy):
    h, w = padded.shape
    counts = np.zeros(8, dtype=np.int64)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            if padded[y, x]:
                for k in range(8):
                    if padded[y + prio_dy[k], x + prio_dx[k]]:
                        counts[priority[k]] += 1
                        break
    return counts


def edm2_counts(edge, priority):
    prio = np.ascontiguousarray(priority, dtype=np.int64)
    # offsets pre-ordered by priority: one memory hop per neighbor probe
    return _edm2_scan(_padded(edge), prio, _OFF_X[prio], _OFF_Y[prio])


@njit(cache=True, nogil=True)
def _lbp_scan(gray):
    h, w = gray.shape
    out = np.zeros((h - 2, w - 2), dtype=np.uint8)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            c = gray[y, x]
            code = 0
            if gray[y, x + 1] >= c:
                code |= 1
            if gray[y - 1, x + 1] >= c:
                code |= 2
            if gray[y - 1, x] >= c:
                code |= 4
            if gray[y - 1, x - 1] >= c:
                code |= 8
            if gray[y, x - 1] >= c:
                code |= 16
            if gray[y + 1, x - 1] >= c:
                code |= 32
            if gray[y + 1, x] >= c:
                code |= 64
            if gray[y + 1, x + 1] >= c:
                code |= 128
            out[y - 1, x - 1] = code
    return out


def lbp_code_map(gray):
    return _lbp_scan(np.ascontiguousarray(gray))


@njit(cache=True, nogil=True)
def _glcm_scan(quantized, dx, dy, levels):
    h, w = quantized.shape
    out = np.zeros((levels, levels), dtype=np.int64)
    for y in range(h):
        ny = y + dy
        if ny < 0 or ny >= h:
            continue
        for x in range(w):
            nx = x + dx
            if 0 <= nx < w:
                out[quantized[y, x], quantized[ny, nx]] += 1
    return out


def glcm_counts(quantized, dx, dy, levels):
    return _glcm_scan(quantized, dx, dy, levels)

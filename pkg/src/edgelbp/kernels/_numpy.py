"""Pure-numpy implementations of the pixel-scan kernels.

These are the fallback path used when numba is disabled or unavailable.
All functions return plain integer counts so downstream feature math is
bit-identical regardless of backend.
"""

import numpy as np

from ..directions import N_DIRECTIONS, OFFSET_X, OFFSET_Y

NAME = "numpy"


def _pair_slices(h, w, dx, dy):
    """Aligned (pixel, neighbor) slice pairs for displacement (dx, dy).

    Covers exactly the pixels whose displaced neighbor is in bounds; both
    views have identical shape (possibly empty).
    """
    src = (slice(max(0, -dy), h - max(0, dy)), slice(max(0, -dx), w - max(0, dx)))
    dst = (slice(max(0, dy), h - max(0, -dy)), slice(max(0, dx), w - max(0, -dx)))
    return src, dst


def edm1_counts(edge):
    """First-order direction counts: (#edge pixels, per-direction neighbor counts)."""
    h, w = edge.shape
    counts = np.zeros(N_DIRECTIONS, dtype=np.int64)
    for d in range(N_DIRECTIONS):
        src, dst = _pair_slices(h, w, int(OFFSET_X[d]), int(OFFSET_Y[d]))
        counts[d] = np.count_nonzero(edge[src] & edge[dst])
    return int(np.count_nonzero(edge)), counts


def edm2_counts(edge, priority):
    """Second-order counts: each edge pixel votes for its best-ranked edge neighbor.

    `priority` lists all 8 direction indices, highest rank first. Pixels with
    no edge neighbor vote for nothing.
    """
    h, w = edge.shape
    counts = np.zeros(N_DIRECTIONS, dtype=np.int64)
    assigned = np.zeros_like(edge, dtype=bool)
    for d in priority:
        d = int(d)
        src, dst = _pair_slices(h, w, int(OFFSET_X[d]), int(OFFSET_Y[d]))
        has_neighbor = np.zeros_like(edge, dtype=bool)
        has_neighbor[src] = edge[src] & edge[dst]
        take = has_neighbor & ~assigned
        counts[d] = np.count_nonzero(take)
        assigned |= take
    return counts


def lbp_code_map(gray):
    """8-bit neighbor-threshold codes for every interior pixel.

    Bit i fires when the neighbor in direction i is >= the center value.
    Caller guarantees the image is at least 3x3.
    """
    h, w = gray.shape
    center = gray[1 : h - 1, 1 : w - 1]
    codes = np.zeros(center.shape, dtype=np.uint16)
    for d in range(N_DIRECTIONS):
        dx, dy = int(OFFSET_X[d]), int(OFFSET_Y[d])
        neighbor = gray[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx]
        codes |= (neighbor >= center).astype(np.uint16) << d
    return codes.astype(np.uint8)


def glcm_counts(quantized, dx, dy, levels):
    """Co-occurrence counts of value pairs at displacement (dx, dy)."""
    h, w = quantized.shape
    src, dst = _pair_slices(h, w, dx, dy)
    i = quantized[src].ravel().astype(np.int64)
    j = quantized[dst].ravel().astype(np.int64)
    flat = np.bincount(i * levels + j, minlength=levels * levels)
    return flat.reshape(levels, levels)

"""Local binary pattern codes and the 256-bin histogram descriptor."""

import numpy as np

from . import kernels
from .directions import N_DIRECTIONS, OFFSET_X, OFFSET_Y
from .errors import OutOfDomainError

LBP_DIM = 256


def lbp_code(gray, x, y):
    """8-bit code of the interior pixel (x, y): bit i is set when the
    neighbor at angle 45*i (east first, counter-clockwise) is >= the center.

    Border pixels have no full neighborhood and are out of domain.
    """
    g = np.asarray(gray)
    h, w = g.shape
    if not (1 <= x < w - 1 and 1 <= y < h - 1):
        raise OutOfDomainError(f"pixel ({x}, {y}) is not interior to a {w}x{h} image")
    center = g[y, x]
    code = 0
    for d in range(N_DIRECTIONS):
        if g[y + int(OFFSET_Y[d]), x + int(OFFSET_X[d])] >= center:
            code |= 1 << d
    return code


def lbp_histogram(gray):
    """Normalized 256-bin histogram of the codes of all interior pixels.

    Images smaller than 3x3 have no interior pixels and yield the all-zero
    histogram; otherwise the bins sum to 1.
    """
    g = np.asarray(gray, dtype=np.uint8)
    h, w = g.shape
    if h < 3 or w < 3:
        return np.zeros(LBP_DIM, dtype=np.float64)
    codes = kernels.lbp_code_map(g)
    hist = np.bincount(codes.ravel(), minlength=LBP_DIM).astype(np.float64)
    return hist / codes.size

"""Compass direction tables shared by the scan kernels and the feature code.

Direction index ``d`` corresponds to the angle ``45 * d`` degrees. The image
y axis grows downward, so 45 deg points to the upper-right neighbor:

    index   0    1    2    3    4    5    6    7
    angle   0   45   90  135  180  225  270  315
    (dx,dy) E   NE    N   NW    W   SW    S   SE
"""

import numpy as np

N_DIRECTIONS = 8

DIRECTION_ANGLES = tuple(45 * d for d in range(N_DIRECTIONS))

# Column / row displacement of the neighbor in each direction.
OFFSET_X = np.array([1, 1, 0, -1, -1, -1, 0, 1], dtype=np.int64)
OFFSET_Y = np.array([0, -1, -1, -1, 0, 1, 1, 1], dtype=np.int64)

# Direction index of the neighbor seen from the other pixel of the pair.
OPPOSITE = np.array([4, 5, 6, 7, 0, 1, 2, 3], dtype=np.int64)


def angle_to_index(angle):
    """Map an angle in {0, 45, ..., 315} to its direction index."""
    if angle % 45 != 0 or not 0 <= angle < 360:
        raise ValueError(f"angle must be a multiple of 45 in [0, 315], got {angle}")
    return angle // 45

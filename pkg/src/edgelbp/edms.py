"""Edge direction matrices (EDM1/EDM2) and the 22 statistics built on them.

EDM1 counts, per compass direction, how many edge pixels have an edge
neighbor in that direction; its center counts the edge pixels themselves.
EDM2 records one vote per edge pixel: the highest-globally-ranked direction
among the pixel's available edge neighbors, where the global ranking orders
directions by descending EDM1 count (ties to the smaller angle).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .directions import DIRECTION_ANGLES, N_DIRECTIONS, OFFSET_X, OFFSET_Y, angle_to_index

# Angles whose statistics are reported individually (EDM2 reports all 8).
REPORTED_ANGLES = (0, 45, 90, 135)

EDMS_DIM = 22


@dataclass(frozen=True)
class Edm:
    """Direction-occurrence matrix: a center count plus 8 direction counts.

    ``counts[d]`` belongs to angle ``45 * d``. ``cells`` lays the counts out
    as the conventional 3x3 matrix where each direction cell sits at the
    spatial offset of the neighbor it counts and the center holds the edge
    pixel count.
    """

    center: int
    counts: np.ndarray

    def cell(self, angle):
        return int(self.counts[angle_to_index(angle)])

    @property
    def cells(self):
        m = np.zeros((3, 3), dtype=np.int64)
        m[1, 1] = self.center
        for d in range(N_DIRECTIONS):
            m[1 + int(OFFSET_Y[d]), 1 + int(OFFSET_X[d])] = self.counts[d]
        return m


def compute_edm1(edge_map):
    """Accumulate first-order direction counts over an edge map."""
    edge = np.asarray(edge_map, dtype=bool)
    center, counts = kernels.edm1_counts(edge)
    return Edm(center=center, counts=np.asarray(counts, dtype=np.int64))


def rank_directions(edm1):
    """All 8 direction indices by descending EDM1 count, ties to smaller angle."""
    counts = edm1.counts
    order = sorted(range(N_DIRECTIONS), key=lambda d: (-int(counts[d]), d))
    return np.array(order, dtype=np.int64)


def ranked_angles(ranking):
    """The ranking expressed in degrees, for display."""
    return tuple(DIRECTION_ANGLES[d] for d in ranking)


def compute_edm2(edge_map, ranking):
    """Accumulate dominant-direction votes over an edge map.

    ``ranking`` must come from the same edge map's EDM1 for the statistics
    to mean anything, but any permutation of the 8 directions is accepted.
    """
    edge = np.asarray(edge_map, dtype=bool)
    counts = kernels.edm2_counts(edge, np.asarray(ranking, dtype=np.int64))
    return Edm(center=int(np.count_nonzero(edge)), counts=np.asarray(counts, dtype=np.int64))


@dataclass(frozen=True)
class EdmsFeatures:
    """The 22 features: 4 pixel regularities, 4 homogeneities, 4 correlations,
    weight, the dominant-axis index, and 8 edge regularities."""

    pixel_regularity: np.ndarray
    homogeneity: np.ndarray
    correlation: np.ndarray
    weight: float
    edge_direction: int
    edge_regularity: np.ndarray

    def to_vector(self):
        return np.concatenate(
            [
                self.pixel_regularity,
                self.homogeneity,
                self.correlation,
                [self.weight, float(self.edge_direction)],
                self.edge_regularity,
            ]
        )


def edms_features(edm1, edm2, source_binary):
    """Derive the 22 statistics from EDM1, EDM2 and the source binary image.

    Ratios with a zero denominator come out 0 so blank images still produce
    a full, finite vector. The direction sum excludes the center cell (the
    center counts pixels, the direction cells count relationships).
    """
    c1 = edm1.counts.astype(np.float64)
    dir_sum = float(c1.sum())
    center1 = float(edm1.center)
    reported = [angle_to_index(a) for a in REPORTED_ANGLES]

    pixel_regularity = np.array(
        [c1[d] / center1 if center1 > 0 else 0.0 for d in reported]
    )
    homogeneity = np.array([c1[d] / dir_sum if dir_sum > 0 else 0.0 for d in reported])
    corr_den = dir_sum + center1
    correlation = np.array([c1[d] / corr_den if corr_den > 0 else 0.0 for d in reported])

    n_black = int(np.count_nonzero(source_binary))
    weight = center1 / n_black if n_black > 0 else 0.0

    # argmax over the four reported angles; ties resolve to the smaller angle
    edge_direction = int(np.argmax(c1[reported]))

    c2 = edm2.counts.astype(np.float64)
    center2 = float(edm2.center)
    edge_regularity = c2 / center2 if center2 > 0 else np.zeros(N_DIRECTIONS)

    return EdmsFeatures(
        pixel_regularity=pixel_regularity,
        homogeneity=homogeneity,
        correlation=correlation,
        weight=weight,
        edge_direction=edge_direction,
        edge_regularity=edge_regularity,
    )


def edms_from_edges(edge_map, source_binary):
    """Full EDM pipeline for one edge map: EDM1, ranking, EDM2, features."""
    edm1 = compute_edm1(edge_map)
    ranking = rank_directions(edm1)
    edm2 = compute_edm2(edge_map, ranking)
    return edms_features(edm1, edm2, source_binary)

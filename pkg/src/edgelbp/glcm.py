"""Gray-level co-occurrence matrices and their six summary statistics.

Four unit-distance orientations are used. With y growing downward the
displacement for 45 deg points to the upper-right:

    0 deg -> (dx, dy) = ( 1,  0)      90 deg -> ( 0, -1)
   45 deg -> ( 1, -1)                135 deg -> (-1, -1)
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

GLCM_ANGLES = (0, 45, 90, 135)
_ANGLE_OFFSETS = {0: (1, 0), 45: (1, -1), 90: (0, -1), 135: (-1, -1)}

# contrast, homogeneity, asm, entropy, variance_i, variance_j, correlation
FEATURES_PER_ORIENTATION = 7
GLCM_DIM = FEATURES_PER_ORIENTATION * len(GLCM_ANGLES)

DEFAULT_LEVELS = 16

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class GlcmOffset:
    """Unit displacement of a co-occurrence pair, tagged with its angle."""

    dx: int
    dy: int
    label: int

    @classmethod
    def from_angle(cls, angle):
        if angle not in _ANGLE_OFFSETS:
            raise ValueError(f"angle must be one of {GLCM_ANGLES}, got {angle}")
        dx, dy = _ANGLE_OFFSETS[angle]
        return cls(dx=dx, dy=dy, label=angle)


@dataclass(frozen=True)
class GlcmMatrix:
    """Co-occurrence counts and, when requested, their normalized form."""

    levels: int
    counts: np.ndarray
    normalized: np.ndarray | None = None


@dataclass(frozen=True)
class GlcmFeatures:
    contrast: float
    homogeneity: float
    asm: float
    entropy: float
    variance_i: float
    variance_j: float
    correlation: float

    def to_vector(self):
        return np.array(
            [
                self.contrast,
                self.homogeneity,
                self.asm,
                self.entropy,
                self.variance_i,
                self.variance_j,
                self.correlation,
            ]
        )


def quantize(gray, levels):
    """Reduce 8-bit intensities to `levels` buckets: floor(v * levels / 256)."""
    if not 2 <= levels <= 256:
        raise ValueError(f"levels must be in [2, 256], got {levels}")
    g = np.asarray(gray, dtype=np.int64)
    return ((g * levels) // 256).astype(np.int64)


def compute_glcm(quantized, offset, symmetric=True, normalize=True, levels=None):
    """Count value pairs at `offset`; optionally symmetrize and normalize.

    Pairs whose displaced pixel falls outside the image are skipped; an
    image too small for the offset yields the all-zero matrix. When
    `levels` is omitted the matrix is sized from the largest value present.
    """
    q = np.asarray(quantized, dtype=np.int64)
    if levels is None:
        levels = max(int(q.max()) + 1 if q.size else 1, 2)
    counts = kernels.glcm_counts(q, offset.dx, offset.dy, levels)
    if symmetric:
        counts = counts + counts.T
    normalized = None
    if normalize:
        total = counts.sum()
        normalized = counts / total if total > 0 else np.zeros_like(counts, dtype=np.float64)
    return GlcmMatrix(levels=levels, counts=counts, normalized=normalized)


def glcm_features(matrix):
    """The six statistics (variance split by axis) of a normalized matrix.

    The all-zero matrix maps to all-zero features; a nonzero matrix that was
    never normalized is rejected.
    """
    if matrix.counts.sum() == 0:
        return GlcmFeatures(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    p = matrix.normalized
    if p is None or abs(float(p.sum()) - 1.0) > _NORM_TOL:
        raise ValueError("glcm_features requires a normalized matrix (sum = 1)")

    n = p.shape[0]
    i = np.arange(n, dtype=np.float64)[:, None]
    j = np.arange(n, dtype=np.float64)[None, :]
    diff = i - j

    contrast = float((p * diff**2).sum())
    homogeneity = float((p / (1.0 + diff**2)).sum())
    asm = float((p * p).sum())
    nonzero = p[p > 0]
    entropy = float(-(nonzero * np.log(nonzero)).sum())

    mu_i = float((p * i).sum())
    mu_j = float((p * j).sum())
    variance_i = float((p * (i - mu_i) ** 2).sum())
    variance_j = float((p * (j - mu_j) ** 2).sum())
    if variance_i > 0 and variance_j > 0:
        correlation = float(
            (p * (i - mu_i) * (j - mu_j)).sum() / np.sqrt(variance_i * variance_j)
        )
    else:
        correlation = 0.0

    return GlcmFeatures(
        contrast=contrast,
        homogeneity=homogeneity,
        asm=asm,
        entropy=entropy,
        variance_i=variance_i,
        variance_j=variance_j,
        correlation=correlation,
    )


def glcm_descriptor(gray, levels=DEFAULT_LEVELS):
    """28-value descriptor: the 7 statistics at each of the 4 orientations,
    from symmetric, normalized matrices."""
    # fixed matrix size regardless of image content, so features are comparable
    q = quantize(gray, levels)
    parts = []
    for angle in GLCM_ANGLES:
        matrix = compute_glcm(q, GlcmOffset.from_angle(angle), levels=levels)
        parts.append(glcm_features(matrix).to_vector())
    return np.concatenate(parts)

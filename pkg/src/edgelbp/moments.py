"""Central moments through order three and the seven rotation invariants.

The invariants are the classic polynomial combinations of scale-normalized
central moments (Hu 1962); they are unchanged by translation, uniform
scaling, and rotation, and the seventh flips sign under mirror reflection.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyShapeError

MOMENT_DIM = 7


@dataclass(frozen=True)
class CentralMoments:
    """Discrete central moments u_pq of the foreground, p + q <= 3.

    u10 and u01 vanish by construction; u00 equals the raw mass m00.
    """

    m00: float
    u20: float
    u02: float
    u11: float
    u30: float
    u03: float
    u21: float
    u12: float


@dataclass(frozen=True)
class NormalizedMoments:
    """Scale-normalized moments eta_pq = u_pq / m00^(1 + (p+q)/2)."""

    eta20: float
    eta02: float
    eta11: float
    eta30: float
    eta03: float
    eta21: float
    eta12: float


def central_moments(binary):
    """Mass, centroid-relative second and third moments of the foreground.

    x is the column index, y the row index. An empty image yields all zeros.

    Raw moments are exact integers, and each central moment is an exact
    rational over them, so shifting the shape by whole pixels reproduces
    the same rational and therefore the bit-identical float.
    """
    b = np.asarray(binary, dtype=bool)
    ys, xs = np.nonzero(b)
    n = int(len(xs))
    if n == 0:
        return CentralMoments(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    x = xs.astype(np.int64)
    y = ys.astype(np.int64)
    m10, m01 = int(x.sum()), int(y.sum())
    m20, m02, m11 = int((x * x).sum()), int((y * y).sum()), int((x * y).sum())
    m30, m03 = int((x * x * x).sum()), int((y * y * y).sum())
    m21, m12 = int((x * x * y).sum()), int((x * y * y).sum())
    return CentralMoments(
        m00=float(n),
        u20=(n * m20 - m10 * m10) / n,
        u02=(n * m02 - m01 * m01) / n,
        u11=(n * m11 - m10 * m01) / n,
        u30=(n * n * m30 - 3 * n * m10 * m20 + 2 * m10**3) / (n * n),
        u03=(n * n * m03 - 3 * n * m01 * m02 + 2 * m01**3) / (n * n),
        u21=(n * n * m21 - 2 * n * m10 * m11 - n * m01 * m20 + 2 * m10 * m10 * m01)
        / (n * n),
        u12=(n * n * m12 - 2 * n * m01 * m11 - n * m10 * m02 + 2 * m01 * m01 * m10)
        / (n * n),
    )


def normalized_moments(c):
    """Scale normalization; order-n moments divide by m00^(1 + n/2)."""
    if c.m00 <= 0:
        raise EmptyShapeError("cannot normalize moments of an empty shape")
    d2 = c.m00**2.0
    d3 = c.m00**2.5
    return NormalizedMoments(
        eta20=c.u20 / d2,
        eta02=c.u02 / d2,
        eta11=c.u11 / d2,
        eta30=c.u30 / d3,
        eta03=c.u03 / d3,
        eta21=c.u21 / d3,
        eta12=c.u12 / d3,
    )


def hu_moments(n):
    """The seven invariant polynomials of the normalized moments."""
    e20, e02, e11 = n.eta20, n.eta02, n.eta11
    e30, e03, e21, e12 = n.eta30, n.eta03, n.eta21, n.eta12

    a = e30 + e12  # x-odd cubic combination
    b = e21 + e03  # y-odd cubic combination

    v1 = e20 + e02
    v2 = (e20 - e02) ** 2 + 4.0 * e11**2
    v3 = (e30 - 3.0 * e12) ** 2 + (3.0 * e21 - e03) ** 2
    v4 = a**2 + b**2
    v5 = (e30 - 3.0 * e12) * a * (a**2 - 3.0 * b**2) + (3.0 * e21 - e03) * b * (
        3.0 * a**2 - b**2
    )
    v6 = (e20 - e02) * (a**2 - b**2) + 4.0 * e11 * a * b
    v7 = (3.0 * e21 - e03) * a * (a**2 - 3.0 * b**2) - (e30 - 3.0 * e12) * b * (
        3.0 * a**2 - b**2
    )
    return np.array([v1, v2, v3, v4, v5, v6, v7])


def signed_log(values):
    """Order-of-magnitude compression sign(v) * ln(1 + |v|), elementwise."""
    v = np.asarray(values, dtype=np.float64)
    return np.sign(v) * np.log1p(np.abs(v))


def moment_descriptor(binary, compress=True):
    """Length-7 invariant vector of a binary shape.

    Components are signed-log compressed by default so their wildly
    different magnitudes survive later z-scoring; pass compress=False for
    the raw invariants. An empty image yields the zero vector.
    """
    c = central_moments(binary)
    if c.m00 == 0:
        return np.zeros(MOMENT_DIM, dtype=np.float64)
    v = hu_moments(normalized_moments(c))
    return signed_log(v) if compress else v

"""Image primitives: decoding, grayscale conversion, binarization, edge maps.

Conventions used everywhere in this package:

* a gray image is a 2-D ``uint8`` array, row-major, y growing downward;
* a binary image is a 2-D ``bool`` array where True marks foreground
  ("black", the shape) and False background;
* an edge map is a binary image whose True pixels are foreground pixels
  that touch background or the image border.
"""

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InvalidImageError


def to_gray(raster):
    """Convert a decoded raster to a 2-D uint8 gray image.

    Multi-channel input is reduced by the unweighted channel mean, rounded
    half up. Single-channel 8-bit input passes through unchanged.
    """
    a = np.asarray(raster)
    if a.ndim == 2:
        if a.size == 0:
            raise InvalidImageError(f"zero-dimension raster, shape {a.shape}")
        if a.dtype == np.uint8:
            return a.copy()
        values = np.floor(a.astype(np.float64) + 0.5)
        if values.min() < 0 or values.max() > 255:
            raise InvalidImageError("single-channel raster values outside [0, 255]")
        return values.astype(np.uint8)
    if a.ndim == 3:
        if a.size == 0 or a.shape[0] == 0 or a.shape[1] == 0:
            raise InvalidImageError(f"zero-dimension raster, shape {a.shape}")
        mean = a.astype(np.float64).mean(axis=2)
        return np.floor(mean + 0.5).astype(np.uint8)
    raise InvalidImageError(f"expected a 2-D or 3-D raster, got shape {a.shape}")


def load_image(path):
    """Decode a PNG/BMP/PGM/PPM file into a gray image."""
    try:
        with Image.open(path) as im:
            if im.mode == "L":
                arr = np.asarray(im)
            else:
                arr = np.asarray(im.convert("RGB"))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise InvalidImageError(f"cannot decode {path}: {exc}") from exc
    return to_gray(arr)


def otsu_threshold(gray):
    """Exhaustive between-class-variance-maximizing threshold in [0, 255].

    The classes at threshold t are {value < t} and {value >= t}. Thresholds
    leaving one class empty score zero; a constant image therefore returns 0
    (nothing below it). Ties take the smallest threshold.
    """
    hist = np.bincount(np.asarray(gray, dtype=np.uint8).ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    values = np.arange(256, dtype=np.float64)
    # cumulative count / intensity mass of the {value < t} class, t = 0..255
    n_lo = np.concatenate(([0.0], np.cumsum(hist)))[:256]
    s_lo = np.concatenate(([0.0], np.cumsum(hist * values)))[:256]
    n_hi = total - n_lo
    s_hi = hist @ values - s_lo
    with np.errstate(divide="ignore", invalid="ignore"):
        mu_lo = np.where(n_lo > 0, s_lo / n_lo, 0.0)
        mu_hi = np.where(n_hi > 0, s_hi / n_hi, 0.0)
    variance = np.where((n_lo > 0) & (n_hi > 0), n_lo * n_hi * (mu_lo - mu_hi) ** 2, 0.0)
    best = int(np.argmax(variance))
    return best if variance[best] > 0 else 0


def binarize_otsu(gray):
    """Threshold a gray image; the minority class becomes foreground.

    Pixels below the Otsu threshold form the candidate foreground; if they
    are the majority the polarity flips, so shapes sparser than their
    background always come out True. An exact 50/50 split keeps the darker
    class as foreground. Images with no separable classes come out all
    background.
    """
    g = np.asarray(gray, dtype=np.uint8)
    t = otsu_threshold(g)
    below = g < t
    n_below = int(np.count_nonzero(below))
    if 2 * n_below <= below.size:
        return below
    return ~below


def extract_edges(binary):
    """Inner 8-connected boundary of the foreground.

    A pixel is an edge iff it is foreground and either lies on the image
    border or has at least one background pixel among its 8 neighbors.
    """
    b = np.asarray(binary, dtype=bool)
    h, w = b.shape
    padded = np.pad(b, 1)
    surrounded = np.ones_like(b)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            surrounded &= padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return b & ~surrounded

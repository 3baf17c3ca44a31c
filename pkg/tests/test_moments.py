import numpy as np
import pytest

from edgelbp import moments
from edgelbp.errors import EmptyShapeError
from edgelbp.moments import (
    MOMENT_DIM,
    central_moments,
    hu_moments,
    moment_descriptor,
    normalized_moments,
    signed_log,
)


def _hu(binary):
    return hu_moments(normalized_moments(central_moments(binary)))


def _disk(r):
    side = 2 * r + 3
    yy, xx = np.mgrid[0:side, 0:side]
    c = side // 2
    return (yy - c) ** 2 + (xx - c) ** 2 <= r * r


def _blob(rng, h=15, w=11):
    while True:
        b = rng.random((h, w)) < 0.45
        if b.sum() >= 3:
            return b


# ---------------------------------------------------------------------------
# central moments


def test_two_pixel_hand_computation():
    b = np.zeros((1, 3), dtype=bool)
    b[0, 0] = b[0, 2] = True  # pixels at x = 0 and x = 2, same row
    c = central_moments(b)
    assert c.m00 == 2.0
    assert c.u20 == 2.0  # (0-1)^2 + (2-1)^2
    assert c.u02 == 0.0 and c.u11 == 0.0
    assert c.u30 == 0.0  # (-1)^3 + 1^3


def test_single_pixel_moments_are_zero():
    b = np.zeros((5, 5), dtype=bool)
    b[3, 2] = True
    c = central_moments(b)
    assert c.m00 == 1.0
    for name in ("u20", "u02", "u11", "u30", "u03", "u21", "u12"):
        assert getattr(c, name) == 0.0


def test_empty_image_moments():
    c = central_moments(np.zeros((4, 4), dtype=bool))
    assert c.m00 == 0.0 and c.u20 == 0.0
    with pytest.raises(EmptyShapeError):
        normalized_moments(c)
    assert np.array_equal(moment_descriptor(np.zeros((4, 4), dtype=bool)), np.zeros(7))


def test_moments_match_float_recount(rng):
    for _ in range(10):
        b = _blob(rng)
        c = central_moments(b)
        ys, xs = np.nonzero(b)
        dx = xs - xs.mean()
        dy = ys - ys.mean()
        assert np.isclose(c.u20, (dx**2).sum(), rtol=1e-12)
        assert np.isclose(c.u02, (dy**2).sum(), rtol=1e-12)
        assert np.isclose(c.u11, (dx * dy).sum(), rtol=1e-12)
        assert np.isclose(c.u30, (dx**3).sum(), rtol=1e-12, atol=1e-9)
        assert np.isclose(c.u03, (dy**3).sum(), rtol=1e-12, atol=1e-9)
        assert np.isclose(c.u21, (dx**2 * dy).sum(), rtol=1e-12, atol=1e-9)
        assert np.isclose(c.u12, (dx * dy**2).sum(), rtol=1e-12, atol=1e-9)


def test_translation_is_bit_exact(rng):
    blob = _blob(rng, 8, 8)
    canvases = []
    for oy, ox in [(0, 0), (5, 3), (11, 12), (2, 9)]:
        canvas = np.zeros((24, 24), dtype=bool)
        canvas[oy : oy + 8, ox : ox + 8] = blob
        canvases.append(canvas)
    ref = central_moments(canvases[0])
    ref_desc = moment_descriptor(canvases[0])
    for canvas in canvases[1:]:
        c = central_moments(canvas)
        for name in ("m00", "u20", "u02", "u11", "u30", "u03", "u21", "u12"):
            assert getattr(c, name) == getattr(ref, name)
        assert np.array_equal(moment_descriptor(canvas), ref_desc)


def test_symmetric_square_moments():
    b = np.zeros((10, 10), dtype=bool)
    b[2:7, 3:8] = True
    c = central_moments(b)
    assert c.u20 == c.u02
    assert c.u11 == 0.0
    assert c.u30 == 0.0 and c.u03 == 0.0
    v = _hu(b)
    assert v[1] == 0.0  # eta20 == eta02 and eta11 == 0
    assert np.allclose(v[2:], 0.0, atol=1e-15)


# ---------------------------------------------------------------------------
# invariances


def test_rotation_by_90_degrees(rng):
    for _ in range(6):
        b = _blob(rng)
        a = _hu(b)
        for k in (1, 2, 3):
            r = _hu(np.rot90(b, k))
            assert np.allclose(a, r, atol=1e-9, rtol=0)


def test_mirror_preserves_six_and_negates_the_seventh(rng):
    for _ in range(6):
        b = _blob(rng)
        a = _hu(b)
        m = _hu(np.fliplr(b))
        assert np.array_equal(a[:6], m[:6])
        assert m[6] == -a[6]
        if abs(a[6]) > 1e-12:
            assert m[6] * a[6] < 0  # a genuine sign flip, not 0 == -0


def test_block_doubling_preserves_invariants(rng):
    # 2x block replication is an exact discrete scaling: third-order etas and
    # the (eta20 - eta02, eta11) pair are preserved exactly, only eta20+eta02
    # picks up the intra-block spread of order 1/(16 n)
    yy, xx = np.mgrid[0:40, 0:40]
    b = ((yy - 16) ** 2 + (xx - 14) ** 2 <= 144) | ((yy - 24) ** 2 + 2 * (xx - 26) ** 2 <= 162)
    assert b.sum() >= 400
    a = _hu(b)
    big = _hu(np.kron(b, np.ones((2, 2), dtype=bool)))
    assert abs(big[0] - a[0]) / abs(a[0]) <= 0.01
    assert np.allclose(a[1:], big[1:], rtol=1e-9, atol=1e-18)


def test_disk_first_invariant_is_analytic(rng):
    # continuous disk: eta20 + eta02 = 1 / (2 pi)
    v1 = _hu(_disk(40))[0]
    assert abs(v1 - 1.0 / (2.0 * np.pi)) / (1.0 / (2.0 * np.pi)) <= 0.01


# ---------------------------------------------------------------------------
# signed log and descriptor


def test_signed_log_properties():
    assert signed_log(0.0) == 0.0
    assert np.isclose(signed_log(np.e - 1.0), 1.0)
    v = np.array([-5.0, -0.1, 0.0, 0.1, 5.0])
    out = signed_log(v)
    assert np.allclose(out, -signed_log(-v))  # odd
    assert (np.diff(out) > 0).all()  # monotone
    assert np.allclose(np.sign(out), np.sign(v))


def test_descriptor_is_compressed_by_default(rng):
    b = _blob(rng)
    raw = moment_descriptor(b, compress=False)
    assert np.array_equal(raw, _hu(b))
    compressed = moment_descriptor(b)
    assert compressed.shape == (MOMENT_DIM,)
    assert np.array_equal(compressed, signed_log(raw))


def test_descriptor_accepts_uint8_mask():
    b = np.zeros((6, 6), dtype=np.uint8)
    b[1:4, 2:5] = 1
    assert np.array_equal(moment_descriptor(b), moment_descriptor(b.astype(bool)))

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chessdet.detector import (
    RESPONSE_SCALE,
    detect,
    diff_response,
    mean_response,
    pre_blur,
    response_at,
    sum_response,
)
from chessdet.ring import build_ring
from chessdet.synth import SynthSpec, render_edge, render_stripe, render_vertex

CORNER = [255] * 4 + [0] * 4 + [255] * 4 + [0] * 4
EDGE = [255] * 8 + [0] * 8
STRIPE = [1] * 4 + [0] * 4 + [1] * 4 + [0] * 4


def image_from_samples(ring, local, geom=None, size=23, fill=0):
    geom = geom or build_ring(5)
    img = np.full((size, size), fill, np.uint8)
    c = size // 2
    for (dx, dy), v in zip(geom.offsets, ring):
        img[c + dy, c + dx] = v
    for (dx, dy), v in zip(geom.local_offsets, local):
        img[c + dy, c + dx] = v
    return img, c


def test_sum_response_examples():
    assert sum_response(CORNER) == 2040
    assert sum_response([77] * 16) == 0
    assert sum_response(EDGE) == 0


def test_diff_response_examples():
    assert diff_response(EDGE) == 2040
    assert diff_response(CORNER) == 0
    assert diff_response([9] * 16) == 0


def test_mean_response_examples():
    assert mean_response([128] * 16, [128] * 5) == 0
    assert mean_response(STRIPE, [1] * 5) == 0.5
    assert mean_response([255] * 4 + [0] * 12, [0] * 5) == 63.75


def test_stripe_case_is_exactly_zero():
    img, c = image_from_samples(STRIPE, [1] * 5)
    assert response_at(img, c, c) == 0.0
    assert detect(img)[c, c] == 0


def test_corner_and_edge_samples():
    img, c = image_from_samples(CORNER, [128] * 5)
    # |5*2040 - 16*640| = 40 -> R = 2040 - 8
    assert response_at(img, c, c) == 2040 - 8
    img, c = image_from_samples(EDGE, [128] * 5)
    assert response_at(img, c, c) < 0


def test_uniform_and_minimal_image(backend):
    r = detect(np.full((11, 11), 40, np.uint8), backend=backend)
    assert r.shape == (11, 11)
    assert np.all(r == 0)
    r = detect(np.full((50, 60), 200, np.uint8), backend=backend)
    assert np.all(r == 0)


def test_too_small(backend):
    with pytest.raises(ValueError):
        detect(np.zeros((10, 30), np.uint8), backend=backend)
    with pytest.raises(ValueError):
        detect(np.zeros((20, 41), np.uint8), build_ring(10), backend=backend)


def test_margin_band_is_zero(backend):
    rng = np.random.default_rng(3)
    img = rng.integers(0, 256, (40, 50), dtype=np.uint8)
    for radius in (5, 10):
        r = detect(img, build_ring(radius), backend=backend)
        m = radius
        assert np.all(r[:m] == 0) and np.all(r[-m:] == 0)
        assert np.all(r[:, :m] == 0) and np.all(r[:, -m:] == 0)
        assert np.any(r[m:-m, m:-m] != 0)


def test_detect_matches_response_at():
    rng = np.random.default_rng(11)
    img = rng.integers(0, 256, (30, 30), dtype=np.uint8)
    r = detect(img)
    for y in range(5, 25, 3):
        for x in range(5, 25, 4):
            assert r[y, x] == response_at(img, x, y) * RESPONSE_SCALE


def test_response_at_bounds():
    with pytest.raises(IndexError):
        response_at(np.zeros((20, 20), np.uint8), 4, 10)


def test_blur_examples(backend):
    img = np.zeros((9, 9), np.uint8)
    img[4, 4] = 255
    assert pre_blur(img, "gauss3", backend=backend)[4, 4] == 92
    assert pre_blur(img, "gauss5", backend=backend)[4, 4] == 36
    flat = np.full((7, 12), 173, np.uint8)
    np.testing.assert_array_equal(pre_blur(flat, "gauss3", backend=backend), flat)
    np.testing.assert_array_equal(pre_blur(flat, "gauss5", backend=backend), flat)
    with pytest.raises(ValueError):
        pre_blur(img, "box")


def reference_blur(img, taps, denom):
    """Direct 2D evaluation of the outer-product stencil with clamped reads."""
    taps = np.asarray(taps, np.int64)
    r = len(taps) // 2
    h, w = img.shape
    out = np.empty_like(img)
    for y in range(h):
        for x in range(w):
            acc = 0
            for j in range(-r, r + 1):
                for i in range(-r, r + 1):
                    yy = min(max(y + j, 0), h - 1)
                    xx = min(max(x + i, 0), w - 1)
                    acc += taps[j + r] * taps[i + r] * int(img[yy, xx])
            d2 = denom * denom
            out[y, x] = (2 * acc + d2) // (2 * d2)
    return out


@pytest.mark.parametrize("kernel,taps,denom", [("gauss3", (1, 3, 1), 5), ("gauss5", (1, 4, 6, 4, 1), 16)])
def test_blur_against_direct_2d(kernel, taps, denom, backend):
    rng = np.random.default_rng(5)
    img = rng.integers(0, 256, (13, 17), dtype=np.uint8)
    np.testing.assert_array_equal(pre_blur(img, kernel, backend=backend), reference_blur(img, taps, denom))


def test_blur_rounds_half_up(backend):
    img = np.zeros((7, 7), np.uint8)
    img[3, 3] = 8
    b = pre_blur(img, "gauss5", backend=backend)
    assert b[4, 4] == 1  # 8 * 16 / 256 = 0.5 exactly
    assert b[4, 5] == 0  # 8 * 4 / 256 = 0.125
    assert b[3, 3] == 1  # 8 * 36 / 256 = 1.125


images = arrays(np.uint8, st.tuples(st.integers(11, 24), st.integers(11, 24)))


@given(images)
def test_mirror_symmetry(img):
    r = detect(img)
    np.testing.assert_array_equal(detect(img[:, ::-1].copy()), r[:, ::-1])
    np.testing.assert_array_equal(detect(img[::-1].copy()), r[::-1])
    np.testing.assert_array_equal(detect(img.T.copy()), r.T)


@given(arrays(np.uint8, (16, 16), elements=st.integers(0, 200)), st.integers(0, 55))
def test_intensity_shift_invariance(img, c):
    np.testing.assert_array_equal(detect(img), detect(img + np.uint8(c)))


@given(arrays(np.uint8, (16, 16), elements=st.integers(0, 25)), st.integers(0, 10))
def test_contrast_scaling(img, k):
    np.testing.assert_array_equal(detect(img * np.uint8(k)).astype(np.int64), k * detect(img).astype(np.int64))


@given(
    st.lists(st.integers(0, 255), min_size=16, max_size=16),
    st.lists(st.integers(0, 255), min_size=5, max_size=5),
    st.integers(-100, 100),
)
def test_scalar_shift_invariance(ring, local, c):
    ring2 = [v + c for v in ring]
    local2 = [v + c for v in local]
    assert sum_response(ring) == sum_response(ring2)
    assert diff_response(ring) == diff_response(ring2)
    assert mean_response(ring, local) == mean_response(ring2, local2)


def test_half_pixel_vertex_centre_is_unique_5x5_maximum():
    spec = SynthSpec(offset_mode="half_pixel", width=96, height=96)
    img, (vx, vy) = render_vertex(spec)
    r = detect(img)
    x, y = int(vx), int(vy)
    assert r[y, x] > 0
    patch = r[y - 2 : y + 3, x - 2 : x + 3]
    assert (patch == r[y, x]).sum() == 1 and r[y, x] == patch.max()
    assert np.unravel_index(np.argmax(r), r.shape) == (y, x)


def test_noisy_vertex_argmax_within_one_pixel():
    img, (vx, vy) = render_vertex(SynthSpec(angle=32.5, noise_variance=1.0, seed=4))
    r = detect(img)
    y, x = np.unravel_index(np.argmax(r), r.shape)
    assert np.hypot(x - vx, y - vy) <= 1.0


@pytest.mark.parametrize("mode", ["grid_aligned", "half_pixel"])
@pytest.mark.parametrize("blur", ["none", "gauss3"])
def test_edges_never_respond(mode, blur):
    for angle in np.arange(0, 180, 7.5):
        e = render_edge(SynthSpec(angle=angle, offset_mode=mode, blur=blur, width=80, height=80))
        assert detect(e).max() <= 0


@given(
    st.integers(1, 9),
    st.floats(0, 180),
    st.integers(-4, 4),
    st.sampled_from(["grid_aligned", "half_pixel"]),
    st.sampled_from(["none", "gauss3"]),
)
def test_stripes_never_respond_at_probe(width, angle, shift, mode, blur):
    spec = SynthSpec(angle=angle, offset_mode=mode, blur=blur, width=64, height=64)
    img = render_stripe(spec, width, shift=shift)
    cx, cy = spec.centre
    # the probe is the pivot pixel, which the stripe passes through when
    # |shift| < width; otherwise it lies beside the stripe, also fine
    assert response_at(img, cx, cy) <= 0

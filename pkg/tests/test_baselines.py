import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chessdet.baselines import FAST_RING, HarrisParams, PtamParams, harris_detect, ptam_detect
from chessdet.sweep import localize
from chessdet.synth import SynthSpec, render_edge, render_vertex


def harris_reference(img, k=0.04, sobel=True):
    f = img.astype(np.float64)
    h, w = f.shape
    if sobel:
        d = np.array([-1, -2, 0, 2, 1.0])
        s = np.array([1, 4, 6, 4, 1.0])
        norm = 1 / 128
    else:
        d = np.array([-1, 0, 1.0])
        s = np.array([0, 1, 0.0])
        norm = 0.5
    r = len(d) // 2
    m = r + 1
    gx = np.zeros_like(f)
    gy = np.zeros_like(f)
    for y in range(r, h - r):
        for x in range(r, w - r):
            win = f[y - r : y + r + 1, x - r : x + r + 1]
            gx[y, x] = (np.outer(s, d) * win).sum() * norm
            gy[y, x] = (np.outer(d, s) * win).sum() * norm
    out = np.zeros_like(f)
    for y in range(m, h - m):
        for x in range(m, w - m):
            a = gx[y - 1 : y + 2, x - 1 : x + 2]
            b = gy[y - 1 : y + 2, x - 1 : x + 2]
            sxx, syy, sxy = (a * a).sum(), (b * b).sum(), (a * b).sum()
            out[y, x] = sxx * syy - sxy * sxy - k * (sxx + syy) ** 2
    return out


def ptam_reference(img, gate):
    a = img.astype(np.int64)
    h, w = a.shape
    out = np.zeros((h, w), bool)
    for y in range(3, h - 3):
        for x in range(3, w - 3):
            s = [a[y + dy, x + dx] for dx, dy in FAST_RING]
            mean = sum(s) / 16.0
            if not abs(a[y, x] - mean) < gate:
                continue
            state = s[15] > mean
            flips = 0
            for v in s:
                if state and v < mean - gate:
                    state, flips = False, flips + 1
                elif not state and v > mean + gate:
                    state, flips = True, flips + 1
            out[y, x] = flips == 4
    return out


def test_params_defaults():
    p = HarrisParams()
    assert (p.sobel_aperture, p.block_size, p.k) == (5, 3, 0.04)
    assert PtamParams().gate == 10
    with pytest.raises(ValueError):
        PtamParams(gate=0)
    with pytest.raises(ValueError):
        HarrisParams(sobel_aperture=3)


def test_fast_ring_is_radius_three_circle():
    ring = np.array(FAST_RING)
    assert len(set(FAST_RING)) == 16
    assert np.all(np.abs(np.hypot(ring[:, 0], ring[:, 1]) - 3) < 0.2)
    steps = np.diff(np.unwrap(np.arctan2(ring[:, 1], ring[:, 0])))
    assert np.all(steps < 0) or np.all(steps > 0)


@pytest.mark.parametrize("sobel", [True, False])
def test_harris_matches_reference(sobel, backend):
    rng = np.random.default_rng(1)
    img = rng.integers(0, 256, (15, 18), dtype=np.uint8)
    got = harris_detect(img, HarrisParams(pre_blur=sobel), backend=backend)
    np.testing.assert_allclose(got, harris_reference(img, sobel=sobel), rtol=1e-10, atol=1e-6)


def test_harris_uniform_and_small(backend):
    assert np.all(harris_detect(np.full((20, 20), 77, np.uint8), backend=backend) == 0)
    with pytest.raises(ValueError):
        harris_detect(np.zeros((6, 20), np.uint8), backend=backend)


def test_harris_vertex_and_edge():
    img, (vx, vy) = render_vertex(SynthSpec(angle=30.0, width=96, height=96))
    r = harris_detect(img)
    y, x = np.unravel_index(np.argmax(r), r.shape)
    assert r[y, x] > 0
    # the X-junction saddle has vanishing gradients, so the integer peaks sit
    # in a ring around the vertex; their 5x5 centre of mass is close
    assert abs(x - vx) <= 2.5 and abs(y - vy) <= 2.5
    fx, fy = localize(r, "com5x5")
    assert np.hypot(fx - vx, fy - vy) <= 1.0
    e = render_edge(SynthSpec(angle=0.0, width=96, height=96))
    re = harris_detect(e)
    assert re[10:-10, 40:56].max() <= 1e-9


@given(arrays(np.uint8, (14, 14)))
def test_harris_quarter_turn_covariance(img):
    r = harris_detect(img)
    np.testing.assert_allclose(harris_detect(np.rot90(img).copy()), np.rot90(r), rtol=1e-9, atol=1e-6)
    np.testing.assert_allclose(harris_detect(img.T.copy()), r.T, rtol=1e-9, atol=1e-6)


@pytest.mark.parametrize("gate", [5, 10, 20])
def test_ptam_matches_reference(gate, backend):
    rng = np.random.default_rng(gate)
    for _ in range(5):
        # coarse blocks so transitions actually happen
        img = np.kron(rng.integers(0, 256, (6, 6)), np.ones((4, 4))).astype(np.uint8)
        got = ptam_detect(img, PtamParams(gate=gate, pre_blur_sigma=0), backend=backend)
        np.testing.assert_array_equal(got, ptam_reference(img, gate))


def test_ptam_uniform(backend):
    assert not ptam_detect(np.full((30, 30), 128, np.uint8), backend=backend).any()


def test_ptam_sharp_vertex(backend):
    # half-pixel mode puts the mid value on the vertex pixel, so the centre
    # test can pass without any blur
    img, (vx, vy) = render_vertex(SynthSpec(angle=0.0, offset_mode="half_pixel", blur="none", width=64, height=64))
    m = ptam_detect(img, PtamParams(gate=10, pre_blur_sigma=0), backend=backend)
    ys, xs = np.nonzero(m)
    assert len(xs) > 0
    assert np.hypot(xs - vx, ys - vy).min() <= 1.0


@pytest.mark.parametrize("angle", [0.0, 10.0, 22.5, 45.0, 70.0])
def test_ptam_gate20_rejects_low_contrast(angle):
    spec = SynthSpec(angle=angle, dark=108, light=148, width=80, height=80)
    img, _ = render_vertex(spec)
    assert not ptam_detect(img, PtamParams(gate=20)).any()
    # the same vertex is found with the smaller gate
    assert ptam_detect(img, PtamParams(gate=10)).any()


@given(arrays(np.uint8, (12, 12), elements=st.integers(0, 200)), st.integers(0, 55))
def test_ptam_shift_invariance(img, c):
    p = PtamParams(gate=10, pre_blur_sigma=0)
    np.testing.assert_array_equal(ptam_detect(img, p), ptam_detect(img + np.uint8(c), p))

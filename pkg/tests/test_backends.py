import os
import subprocess
import sys

import numba
import numpy as np
import pytest

from chessdet._backend import resolve
from chessdet.baselines import HarrisParams, PtamParams, harris_detect, ptam_detect
from chessdet.detector import detect, pre_blur
from chessdet.ring import build_ring


@numba.njit(cache=True)
def scalar_reference(img, ring, local, margin):
    """Direct transcription of the response definition, one pixel at a time."""
    h, w = img.shape
    out = np.zeros((h, w), np.int64)
    for y in range(margin, h - margin):
        for x in range(margin, w - margin):
            s = np.empty(16, np.int64)
            for n in range(16):
                s[n] = img[y + ring[n, 1], x + ring[n, 0]]
            sr = 0
            for n in range(4):
                sr += abs(s[n] + s[n + 8] - s[n + 4] - s[n + 12])
            dr = 0
            for n in range(8):
                dr += abs(s[n] - s[n + 8])
            ring_sum = 0
            for n in range(16):
                ring_sum += s[n]
            local_sum = 0
            for k in range(local.shape[0]):
                local_sum += img[y + local[k, 1], x + local[k, 0]]
            # 5 * (SR - DR - 16 * |ring_sum / 16 - local_sum / 5|)
            out[y, x] = 5 * sr - 5 * dr - abs(5 * ring_sum - 16 * local_sum)
    return out


def reference(img, geom):
    return scalar_reference(img, geom.offsets_array, geom.local_array, geom.margin)


def random_images(n, shape, seed):
    rng = np.random.default_rng(seed)
    for i in range(n):
        kind = i % 3
        if kind == 0:
            yield rng.integers(0, 256, shape, dtype=np.uint8)
        elif kind == 1:
            # extremes stress the widest intermediate values
            yield rng.choice(np.array([0, 255], np.uint8), shape)
        else:
            blocks = rng.integers(0, 256, (shape[0] // 8 + 1, shape[1] // 8 + 1))
            yield np.kron(blocks, np.ones((8, 8)))[: shape[0], : shape[1]].astype(np.uint8)


def test_resolve():
    assert resolve("numpy") == "numpy"
    assert resolve("numba") == "numba"
    assert resolve(None) in ("numba", "numpy")
    assert resolve("auto") == resolve(None)
    with pytest.raises(ValueError):
        resolve("cuda")


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, CHESSDET_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from chessdet._backend import resolve; print(resolve(None))"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected


def test_oracle_equivalence_1000_images(backend):
    geom = build_ring(5)
    for img in random_images(1000, (64, 64), seed=2024):
        np.testing.assert_array_equal(detect(img, geom, backend=backend), reference(img, geom))


def test_oracle_equivalence_radius10(backend):
    geom = build_ring(10)
    for img in random_images(60, (64, 80), seed=7):
        np.testing.assert_array_equal(detect(img, geom, backend=backend), reference(img, geom))


def test_response_dtype_and_range(backend):
    img = np.zeros((40, 40), np.uint8)
    img[::2, ::2] = 255
    r = detect(img, backend=backend)
    assert r.dtype == np.int32


@pytest.mark.parametrize("shape", [(11, 11), (17, 64), (64, 17), (100, 73)])
def test_all_kernels_agree_across_backends(shape):
    for img in random_images(6, shape, seed=shape[0] * shape[1]):
        np.testing.assert_array_equal(detect(img, backend="numpy"), detect(img, backend="numba"))
        for k in ("gauss3", "gauss5"):
            np.testing.assert_array_equal(pre_blur(img, k, backend="numpy"), pre_blur(img, k, backend="numba"))
        for blur in (True, False):
            p = HarrisParams(pre_blur=blur)
            np.testing.assert_allclose(
                harris_detect(img, p, backend="numpy"), harris_detect(img, p, backend="numba"), rtol=1e-12, atol=1e-9
            )
        for gate in (5, 10, 20):
            p = PtamParams(gate=gate, pre_blur_sigma=0)
            np.testing.assert_array_equal(ptam_detect(img, p, backend="numpy"), ptam_detect(img, p, backend="numba"))


def test_row_split_does_not_change_result(backend):
    # computing two overlapping bands separately reproduces the full frame
    rng = np.random.default_rng(4)
    img = rng.integers(0, 256, (80, 60), dtype=np.uint8)
    full = detect(img, backend=backend)
    top = detect(img[:45], backend=backend)
    bottom = detect(img[35:], backend=backend)
    np.testing.assert_array_equal(full[5:40], top[5:40])
    np.testing.assert_array_equal(full[40:75], bottom[5:40])

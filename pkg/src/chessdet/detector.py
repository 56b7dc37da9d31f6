"""ChESS response: sum response minus diff response minus 16x mean response.

The whole-image response is kept in exact integer form. ``detect`` returns
``R5 = 5*SR - 5*DR - |5*sum(ring) - 16*sum(local)|``, which is five times the
real-valued response ``R`` (the factor clears the 1/5 of the five-pixel local
mean). Divide by :data:`RESPONSE_SCALE` to get ``R`` in intensity units.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .ring import RingGeometry, build_ring, sample_local, sample_ring

RESPONSE_SCALE = 5

# 1D stencils (integer taps, denominator) applied horizontally then vertically
BLUR_KERNELS: dict[str, tuple[tuple[int, ...], int]] = {
    "gauss3": ((1, 3, 1), 5),
    "gauss5": ((1, 4, 6, 4, 1), 16),
}


def _as_gray(image) -> np.ndarray:
    a = np.asarray(image)
    if a.ndim != 2:
        raise ValueError(f"expected a 2D grayscale image, got shape {a.shape}")
    if a.dtype != np.uint8:
        if a.size and (a.min() < 0 or a.max() > 255):
            raise ValueError("intensities must lie in [0, 255]")
        a = a.astype(np.uint8)
    return np.ascontiguousarray(a)


def sum_response(samples) -> int:
    s = np.asarray(samples, dtype=np.int64)
    return int(sum(abs(s[n] + s[n + 8] - s[n + 4] - s[n + 12]) for n in range(4)))


def diff_response(samples) -> int:
    s = np.asarray(samples, dtype=np.int64)
    return int(sum(abs(s[n] - s[n + 8]) for n in range(8)))


def mean_response(samples, local) -> float:
    """``|mean(ring) - mean(local)|``.

    Evaluated as ``|5*sum(ring) - 16*sum(local)| / 80`` so the only rounding
    is the final conversion of an exact rational to float.
    """
    s = np.asarray(samples, dtype=np.int64)
    l = np.asarray(local, dtype=np.int64)
    nr, nl = len(s), len(l)
    return abs(nl * int(s.sum()) - nr * int(l.sum())) / (nr * nl)


def response_scaled(samples, local) -> int:
    """Exact integer ``5 * R`` from 16 ring and 5 local samples."""
    s = np.asarray(samples, dtype=np.int64)
    l = np.asarray(local, dtype=np.int64)
    return 5 * sum_response(s) - 5 * diff_response(s) - abs(5 * int(s.sum()) - 16 * int(l.sum()))


def response_at(image, x: int, y: int, geom: RingGeometry | None = None) -> float:
    geom = geom or build_ring(5)
    img = _as_gray(image)
    return response_scaled(sample_ring(img, x, y, geom), sample_local(img, x, y, geom)) / RESPONSE_SCALE


def detect(image, geom: RingGeometry | None = None, backend: str | None = None) -> np.ndarray:
    """Full-frame response (int32, scaled by 5). The margin band is zero."""
    geom = geom or build_ring(5)
    img = _as_gray(image)
    side = 2 * geom.margin + 1
    if img.shape[0] < side or img.shape[1] < side:
        raise ValueError(f"image {img.shape[1]}x{img.shape[0]} smaller than {side}x{side}")
    k = kernels.get(backend)
    return k.chess_response(img, geom.offsets_array, geom.local_array, geom.margin)


def pre_blur(image, kernel: str = "gauss5", backend: str | None = None) -> np.ndarray:
    """Separable integer blur, clamp-to-edge borders.

    Both passes accumulate exactly; the single normalisation at the end rounds
    half up (ties away from zero for these non-negative sums).
    """
    try:
        taps, denom = BLUR_KERNELS[kernel]
    except KeyError:
        raise ValueError(f"unknown blur kernel {kernel!r}; expected one of {sorted(BLUR_KERNELS)}") from None
    img = _as_gray(image)
    if img.size == 0:
        raise ValueError("empty image")
    k = kernels.get(backend)
    return k.separable_blur(img, np.asarray(taps, dtype=np.int32), denom)

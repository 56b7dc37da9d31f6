"""Competitor detectors: Harris-Stephens and a PTAM-style ring-transition test.

Harris gradients are normalised so a unit intensity ramp gives gradient 1
(5x5 Sobel: derivative taps [-1 -2 0 2 1] times smoothing [1 4 6 4 1], over
128; unblurred variant: central difference over 2). The structure tensor is
a plain 3x3 box *sum*. Only argmax-style comparisons depend on it, so the
absolute scale is a convention.

The PTAM-style test is a reconstruction from its published description: a
pixel is a candidate when the centre lies strictly within ``gate`` of the
ring mean, and walking the radius-3 FAST ring with hysteresis (state flips
only on leaving the mean +/- gate band on the far side, initial state from
the last sample) gives exactly four flips.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .detector import _as_gray, pre_blur

FAST_RING = (
    (0, 3), (1, 3), (2, 2), (3, 1),
    (3, 0), (3, -1), (2, -2), (1, -3),
    (0, -3), (-1, -3), (-2, -2), (-3, -1),
    (-3, 0), (-3, 1), (-2, 2), (-1, 3),
)

_SOBEL5 = (np.array([-1.0, -2.0, 0.0, 2.0, 1.0]), np.array([1.0, 4.0, 6.0, 4.0, 1.0]), 1.0 / 128.0)
_CENTRAL = (np.array([-1.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]), 0.5)


@dataclass(frozen=True)
class HarrisParams:
    sobel_aperture: int = 5
    block_size: int = 3
    k: float = 0.04
    pre_blur: bool = True

    def __post_init__(self):
        if self.sobel_aperture != 5 or self.block_size != 3:
            raise ValueError("only the 5x5 Sobel aperture with a 3x3 block is implemented")

    @property
    def margin(self) -> int:
        return 3 if self.pre_blur else 2


@dataclass(frozen=True)
class PtamParams:
    gate: int = 10
    # 0 disables; 1 is the binomial [1 4 6 4 1]/16 stencil (variance exactly 1)
    pre_blur_sigma: float = 1.0

    def __post_init__(self):
        if self.gate <= 0:
            raise ValueError("gate must be positive")
        if self.pre_blur_sigma not in (0, 0.0, 1, 1.0):
            raise ValueError("pre_blur_sigma must be 0 (off) or 1")


def harris_detect(image, p: HarrisParams | None = None, backend: str | None = None) -> np.ndarray:
    """det(A) - k*trace(A)^2 per pixel (float64); border band zeroed.

    ``pre_blur=False`` swaps the smoothing Sobel for a bare central difference.
    """
    p = p or HarrisParams()
    img = _as_gray(image)
    side = 2 * p.margin + 1
    if img.shape[0] < side or img.shape[1] < side:
        raise ValueError(f"image {img.shape[1]}x{img.shape[0]} too small for Harris apertures")
    deriv, smooth, norm = _SOBEL5 if p.pre_blur else _CENTRAL
    return kernels.get(backend).harris_response(img, deriv, smooth, norm, float(p.k))


def ptam_detect(image, p: PtamParams | None = None, backend: str | None = None) -> np.ndarray:
    p = p or PtamParams()
    img = _as_gray(image)
    if p.pre_blur_sigma:
        img = pre_blur(img, "gauss5", backend=backend)
    ring = np.asarray(FAST_RING, dtype=np.int64)
    return kernels.get(backend).ptam_corners(img, ring, int(p.gate))

"""Sampling geometry: the 16-point ring, the centre (local-mean) set and the margin.

Image convention: x grows rightward, y grows downward. Ring index 0 is the
offset (+r, 0) and indices advance with increasing ``atan2(dy, dx)``, which
is clockwise as the image is displayed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# radius-5 ring in angular order; the only integer solution whose spacings
# alternate between ~21.8 and ~23.2 degrees
_RING5 = (
    (5, 0), (5, 2), (4, 4), (2, 5),
    (0, 5), (-2, 5), (-4, 4), (-5, 2),
    (-5, 0), (-5, -2), (-4, -4), (-2, -5),
    (0, -5), (2, -5), (4, -4), (5, -2),
)
_LOCAL5 = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))

SUPPORTED_RADII = (5, 10)


@dataclass(frozen=True)
class RingGeometry:
    """Immutable sampling pattern.

    ``offsets`` and ``local_offsets`` are ``(dx, dy)`` tuples. ``margin`` is the
    largest absolute offset component; responses closer than this to a border
    are defined as zero.
    """

    offsets: tuple[tuple[int, int], ...]
    local_offsets: tuple[tuple[int, int], ...]
    radius: int
    margin: int

    @property
    def offsets_array(self) -> np.ndarray:
        return np.asarray(self.offsets, dtype=np.int64)

    @property
    def local_array(self) -> np.ndarray:
        return np.asarray(self.local_offsets, dtype=np.int64)

    def angles_deg(self) -> np.ndarray:
        o = self.offsets_array
        return np.degrees(np.arctan2(o[:, 1], o[:, 0])) % 360.0


def build_ring(radius: int = 5) -> RingGeometry:
    if radius not in SUPPORTED_RADII:
        raise ValueError(f"unsupported ring radius {radius!r}; expected one of {SUPPORTED_RADII}")
    k = radius // 5
    offsets = tuple((k * dx, k * dy) for dx, dy in _RING5)
    local = tuple((k * dx, k * dy) for dx, dy in _LOCAL5)
    margin = max(max(abs(dx), abs(dy)) for dx, dy in offsets + local)
    return RingGeometry(offsets=offsets, local_offsets=local, radius=radius, margin=margin)


def _check_inside(image: np.ndarray, x: int, y: int, margin: int) -> None:
    h, w = image.shape
    if not (margin <= x < w - margin and margin <= y < h - margin):
        raise IndexError(
            f"pixel ({x}, {y}) lies within {margin} px of the border of a {w}x{h} image"
        )


def sample_ring(image: np.ndarray, x: int, y: int, geom: RingGeometry) -> np.ndarray:
    """Return the 16 ring intensities around ``(x, y)`` in ring order (int64)."""
    _check_inside(image, x, y, geom.margin)
    o = geom.offsets_array
    return image[y + o[:, 1], x + o[:, 0]].astype(np.int64)


def sample_local(image: np.ndarray, x: int, y: int, geom: RingGeometry) -> np.ndarray:
    """Return the centre-set intensities used for the local mean (int64)."""
    _check_inside(image, x, y, geom.margin)
    o = geom.local_array
    return image[y + o[:, 1], x + o[:, 0]].astype(np.int64)

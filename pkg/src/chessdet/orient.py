"""Eight-way orientation labels from the ring samples of a selected feature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ring import RingGeometry, build_ring, sample_ring


class NoOrientationError(ValueError):
    """All averaged measures vanish, so no orientation can be assigned."""


@dataclass(frozen=True)
class OrientationMeasures:
    m: tuple[int, int, int, int]
    # three times the wrapped running average, kept integral
    am3: tuple[int, int, int, int]
    bin: int


def measures(samples) -> tuple[int, int, int, int]:
    s = np.asarray(samples, dtype=np.int64)
    if s.shape != (16,):
        raise ValueError(f"expected 16 ring samples, got shape {s.shape}")
    return tuple(int(s[n] + s[n + 8] - s[n + 4] - s[n + 12]) for n in range(4))


def orientation_measures(samples) -> OrientationMeasures:
    m = measures(samples)
    # neighbours past either end wrap round with a sign flip (M[n+4] == -M[n])
    am3 = (
        -m[3] + m[0] + m[1],
        m[0] + m[1] + m[2],
        m[1] + m[2] + m[3],
        m[2] + m[3] - m[0],
    )
    mags = [abs(a) for a in am3]
    best = max(mags)
    if best == 0:
        raise NoOrientationError("degenerate ring samples: every averaged measure is zero")
    i = mags.index(best)
    b = i + 4 if m[i] < 0 else i
    return OrientationMeasures(m=m, am3=am3, bin=b)


def orientation_bin(samples) -> int:
    return orientation_measures(samples).bin


def orientation_at(image, x: int, y: int, geom: RingGeometry | None = None) -> int:
    return orientation_bin(sample_ring(np.asarray(image), x, y, geom or build_ring(5)))

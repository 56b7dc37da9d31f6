"""End-to-end convenience: image -> labelled sub-pixel features."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .detector import RESPONSE_SCALE, _as_gray, detect, pre_blur
from .orient import NoOrientationError, orientation_at
from .ring import RingGeometry, build_ring
from .select import Feature, SelectConfig, select_features


def find_features(
    image,
    *,
    radius: int = 5,
    blur: str | None = None,
    cfg: SelectConfig | None = None,
    orient: bool = True,
    backend: str | None = None,
) -> list[Feature]:
    """Detect, select and (optionally) label features.

    ``strength`` is reported in intensity units. Orientation is computed only
    for the selected features, from the same (possibly blurred) image the
    response was computed on.
    """
    geom: RingGeometry = build_ring(radius)
    img = _as_gray(image)
    if blur:
        img = pre_blur(img, blur, backend=backend)
    resp = detect(img, geom, backend=backend)
    feats = select_features(resp, cfg, backend=backend)
    h, w = img.shape
    out = []
    for f in feats:
        b = None
        if orient:
            x, y = int(round(f.x)), int(round(f.y))
            x = min(max(x, geom.margin), w - 1 - geom.margin)
            y = min(max(y, geom.margin), h - 1 - geom.margin)
            try:
                b = orientation_at(img, x, y, geom)
            except NoOrientationError:
                b = None
        out.append(replace(f, strength=f.strength / RESPONSE_SCALE, orientation_bin=b))
    return out


def features_to_csv(features) -> str:
    lines = ["x,y,strength,bin"]
    for f in features:
        b = "" if f.orientation_bin is None else str(f.orientation_bin)
        lines.append(f"{f.x:.4f},{f.y:.4f},{f.strength:.4f},{b}")
    return "\n".join(lines) + "\n"


def features_array(features) -> np.ndarray:
    return np.array([[f.x, f.y] for f in features], dtype=np.float64).reshape(-1, 2)

"""Feature selection from a response image.

Pipeline: positive threshold -> non-maximum suppression -> connectivity
filter -> neighbourhood comparison -> 5x5 centre-of-mass refinement.
Candidates are ``(x, y)`` integer tuples throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class Feature:
    x: float
    y: float
    strength: float
    orientation_bin: int | None = None


@dataclass(frozen=True)
class SelectConfig:
    nms_window: int = 5
    neighbourhood_area: int = 64
    neighbourhood_proportion: float = 0.1
    require_connectivity: bool = True

    def __post_init__(self):
        if self.nms_window < 3 or self.nms_window % 2 == 0:
            raise ValueError(f"nms_window must be odd and >= 3, got {self.nms_window}")
        if not 0.0 < self.neighbourhood_proportion <= 1.0:
            raise ValueError("neighbourhood_proportion must lie in (0, 1]")
        if self.neighbourhood_area < 1:
            raise ValueError("neighbourhood_area must be positive")


def positive_mask(resp) -> np.ndarray:
    return np.asarray(resp) > 0


def non_max_suppress(resp, window: int = 5, backend: str | None = None) -> list[tuple[int, int]]:
    """Positive pixels that beat every other pixel in the centred window.

    On equal values the earlier position in row-major (y, x) order survives.
    Returned in row-major order.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd, got {window}")
    r = np.ascontiguousarray(resp)
    mask = kernels.get(backend).nms_mask(r, window)
    ys, xs = np.nonzero(mask)
    return [(int(x), int(y)) for y, x in zip(ys, xs)]


def _has_positive_neighbour(pos: np.ndarray, x: int, y: int) -> bool:
    h, w = pos.shape
    y0, y1 = max(y - 1, 0), min(y + 2, h)
    x0, x1 = max(x - 1, 0), min(x + 2, w)
    return int(pos[y0:y1, x0:x1].sum()) - int(pos[y, x]) > 0


def connectivity_filter(resp, candidates) -> list[tuple[int, int]]:
    """Drop candidates with no positive pixel among their eight neighbours."""
    pos = positive_mask(resp)
    return [(x, y) for x, y in candidates if _has_positive_neighbour(pos, x, y)]


def isolated_positive_mask(resp) -> np.ndarray:
    """Mask of positive pixels with no positive 8-neighbour."""
    pos = positive_mask(resp)
    p = np.pad(pos, 1).astype(np.int16)
    h, w = pos.shape
    count = sum(
        p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        for dy in (-1, 0, 1)
        for dx in (-1, 0, 1)
        if dx or dy
    )
    return pos & (count == 0)


def neighbourhood_compare(resp, candidates, area: int = 64, proportion: float = 0.1) -> list[tuple[int, int]]:
    """Drop candidates weaker than ``proportion`` of the strongest nearby one.

    "Nearby" is the candidate's ``area``-sized tile plus its eight neighbouring
    tiles, so no decision depends on where a tile boundary falls.
    """
    if not 0.0 < proportion <= 1.0:
        raise ValueError("proportion must lie in (0, 1]")
    if not candidates:
        return []
    r = np.asarray(resp)
    tile_max: dict[tuple[int, int], float] = {}
    for x, y in candidates:
        key = (x // area, y // area)
        v = float(r[y, x])
        if v > tile_max.get(key, -np.inf):
            tile_max[key] = v
    kept = []
    for x, y in candidates:
        tx, ty = x // area, y // area
        best = max(
            tile_max.get((tx + i, ty + j), -np.inf) for i in (-1, 0, 1) for j in (-1, 0, 1)
        )
        if float(r[y, x]) >= proportion * best:
            kept.append((x, y))
    return kept


def subpixel_com(resp, x: int, y: int) -> tuple[float, float]:
    """Centre of mass of ``max(resp, 0)`` over the 5x5 patch around (x, y)."""
    r = np.asarray(resp)
    h, w = r.shape
    if not (2 <= x < w - 2 and 2 <= y < h - 2):
        raise IndexError(f"5x5 patch around ({x}, {y}) leaves the {w}x{h} response")
    patch = np.clip(r[y - 2 : y + 3, x - 2 : x + 3].astype(np.float64), 0.0, None)
    total = patch.sum()
    if total == 0:
        return float(x), float(y)
    d = np.arange(-2, 3, dtype=np.float64)
    fx = x + float((patch.sum(axis=0) * d).sum() / total)
    fy = y + float((patch.sum(axis=1) * d).sum() / total)
    return fx, fy


def select_features(resp, cfg: SelectConfig | None = None, backend: str | None = None) -> list[Feature]:
    cfg = cfg or SelectConfig()
    r = np.asarray(resp)
    h, w = r.shape
    cands = non_max_suppress(r, cfg.nms_window, backend=backend)
    if cfg.require_connectivity:
        cands = connectivity_filter(r, cands)
    cands = neighbourhood_compare(r, cands, cfg.neighbourhood_area, cfg.neighbourhood_proportion)
    feats = []
    for x, y in cands:
        if 2 <= x < w - 2 and 2 <= y < h - 2:
            fx, fy = subpixel_com(r, x, y)
        else:
            fx, fy = float(x), float(y)
        feats.append((-float(r[y, x]), y, x, Feature(fx, fy, float(r[y, x]))))
    feats.sort(key=lambda t: t[:3])
    return [f for *_, f in feats]

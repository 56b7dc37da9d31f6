"""Synthetic test images with exact ground truth.

Rendering follows the usual simulation protocol: an ideal two-colour pattern
is rasterised, rotated about the vertex by inverse mapping with bilinear
interpolation, rounded to 8 bits, optionally blurred, then given additive
Gaussian noise with saturation at 0 and 255.

Pixel centres sit at integer coordinates. Positive angles rotate the pattern
clockwise as displayed (x right, y down), matching the ring index direction.
The source patterns are evaluated analytically at integer positions, so the
rotation never reads past a raster edge.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Callable

import numpy as np

from .detector import BLUR_KERNELS, pre_blur

OFFSET_MODES = ("grid_aligned", "half_pixel")
BLURS = ("none", "gauss3", "gauss5")


@dataclass(frozen=True)
class SynthSpec:
    angle: float = 0.0
    offset_mode: str = "grid_aligned"
    dark: int = 64
    light: int = 191
    noise_variance: float = 0.0
    seed: int = 0
    blur: str = "gauss3"
    width: int = 640
    height: int = 480
    # pixel index of the vertex; defaults to the canvas centre
    cx: int | None = None
    cy: int | None = None

    def __post_init__(self):
        if self.offset_mode not in OFFSET_MODES:
            raise ValueError(f"offset_mode must be one of {OFFSET_MODES}")
        if self.blur not in BLURS:
            raise ValueError(f"blur must be one of {BLURS}")
        if not 0 <= self.dark < self.light <= 255:
            raise ValueError("need 0 <= dark < light <= 255")
        if self.width < 64 or self.height < 64:
            raise ValueError("canvas must be at least 64x64")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be non-negative")
        cx, cy = self.centre
        if not (10 < cx < self.width - 10 and 10 < cy < self.height - 10):
            raise ValueError("vertex must lie well inside the canvas")

    @property
    def centre(self) -> tuple[int, int]:
        return (
            self.width // 2 if self.cx is None else self.cx,
            self.height // 2 if self.cy is None else self.cy,
        )

    @property
    def vertex(self) -> tuple[float, float]:
        """Ground-truth vertex position, fixed before rasterisation."""
        cx, cy = self.centre
        if self.offset_mode == "grid_aligned":
            return cx - 0.5, cy - 0.5
        return float(cx), float(cy)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SynthSpec":
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in types:
                raise ValueError(f"unknown SynthSpec key {key!r}")
            t = str(types[key])
            if "int" in t:
                kw[key] = int(val)
            elif "float" in t:
                kw[key] = float(val)
            else:
                kw[key] = val
        return cls(**kw)


Pattern = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _rotate_bilinear(pattern: Pattern, width: int, height: int, pivot, angle_deg: float) -> np.ndarray:
    """Inverse-map every output pixel into the unrotated pattern, interpolate."""
    th = np.deg2rad(angle_deg)
    c, s = np.cos(th), np.sin(th)
    px, py = pivot
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    dx, dy = xs - px, ys - py
    qx = px + c * dx + s * dy
    qy = py - s * dx + c * dy
    x0 = np.floor(qx)
    y0 = np.floor(qy)
    fx = qx - x0
    fy = qy - y0
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)
    v00 = pattern(x0, y0)
    v10 = pattern(x0 + 1, y0)
    v01 = pattern(x0, y0 + 1)
    v11 = pattern(x0 + 1, y0 + 1)
    top = v00 + fx * (v10 - v00)
    bot = v01 + fx * (v11 - v01)
    val = top + fy * (bot - top)
    return np.clip(np.floor(val + 0.5), 0, 255).astype(np.uint8)


def _finish(img: np.ndarray, blur: str, noise_variance: float, seed: int) -> np.ndarray:
    if blur != "none":
        img = pre_blur(img, blur)
    return add_noise(img, noise_variance, seed)


def _mid(dark: int, light: int) -> int:
    return (dark + light + 1) // 2


def _quadrant_pattern(spec: SynthSpec) -> Pattern:
    cx, cy = spec.centre
    dark, light, mid = float(spec.dark), float(spec.light), float(_mid(spec.dark, spec.light))

    if spec.offset_mode == "grid_aligned":

        def pat(i, j):
            return np.where((i < cx) == (j < cy), dark, light)

    else:

        def pat(i, j):
            v = np.where((i < cx) == (j < cy), dark, light)
            return np.where((i == cx) | (j == cy), mid, v)

    return pat


def render_vertex(spec: SynthSpec) -> tuple[np.ndarray, tuple[float, float]]:
    """Render one chess-board vertex; returns (image, exact vertex position)."""
    v = spec.vertex
    img = _rotate_bilinear(_quadrant_pattern(spec), spec.width, spec.height, v, spec.angle)
    return _finish(img, spec.blur, spec.noise_variance, spec.seed), v


def board_vertices(rows: int, cols: int, square: float, angle: float, spec: SynthSpec) -> np.ndarray:
    """Interior vertex positions (N, 2) of the board, row-major, rotated."""
    ox, oy = spec.vertex
    gx = (np.arange(1, cols) - cols / 2) * square
    gy = (np.arange(1, rows) - rows / 2) * square
    yy, xx = np.meshgrid(gy, gx, indexing="ij")
    th = np.deg2rad(angle)
    c, s = np.cos(th), np.sin(th)
    x = ox + c * xx.ravel() - s * yy.ravel()
    y = oy + s * xx.ravel() + c * yy.ravel()
    return np.column_stack([x, y])


def render_board(
    rows: int, cols: int, square: int, angle: float = 0.0, spec: SynthSpec | None = None, **overrides
) -> tuple[np.ndarray, np.ndarray]:
    """Render a rows x cols board of alternating squares centred on the canvas.

    The outermost squares extend to the canvas edge, so only the
    ``(rows-1)*(cols-1)`` interior points are vertices (a 2x2 board is exactly
    :func:`render_vertex`). ``spec.angle`` is ignored in favour of ``angle``.
    """
    if rows < 2 or cols < 2:
        raise ValueError("a board needs at least 2x2 squares")
    if square < 1:
        raise ValueError("square size must be positive")
    spec = replace(spec or SynthSpec(), **overrides)
    ox, oy = spec.vertex
    # left/top board edges in the unrotated frame
    x0 = ox - cols / 2 * square
    y0 = oy - rows / 2 * square
    dark, light, mid = float(spec.dark), float(spec.light), float(_mid(spec.dark, spec.light))
    half = spec.offset_mode == "half_pixel"

    def pat(i, j):
        u = (i - x0) / square
        w = (j - y0) / square
        ci = np.clip(np.floor(u), 0, cols - 1).astype(np.int64)
        ri = np.clip(np.floor(w), 0, rows - 1).astype(np.int64)
        v = np.where((ci + ri) % 2 == 0, dark, light)
        if half:
            on_col = (u == np.round(u)) & (u > 0) & (u < cols)
            on_row = (w == np.round(w)) & (w > 0) & (w < rows)
            v = np.where(on_col | on_row, mid, v)
        return v

    verts = board_vertices(rows, cols, square, angle, spec)
    m = 6
    if (verts[:, 0].min() < m or verts[:, 1].min() < m
            or verts[:, 0].max() > spec.width - 1 - m or verts[:, 1].max() > spec.height - 1 - m):
        raise ValueError("board vertices fall outside the canvas margin")
    img = _rotate_bilinear(pat, spec.width, spec.height, (ox, oy), angle)
    return _finish(img, spec.blur, spec.noise_variance, spec.seed), verts


def render_edge(spec: SynthSpec) -> np.ndarray:
    """A single straight edge through the vertex position given by spec, rotated."""
    cx, _ = spec.centre
    dark, light = float(spec.dark), float(spec.light)
    half = spec.offset_mode == "half_pixel"
    mid = float(_mid(spec.dark, spec.light))

    def pat(i, j):
        v = np.where(i < cx, dark, light)
        if half:
            v = np.where(i == cx, mid, v)
        return v + 0.0 * j

    img = _rotate_bilinear(pat, spec.width, spec.height, spec.vertex, spec.angle)
    return _finish(img, spec.blur, spec.noise_variance, spec.seed)


def render_stripe(spec: SynthSpec, stripe_width: int, shift: int = 0) -> np.ndarray:
    """A solid light stripe ``stripe_width`` px wide on a dark ground.

    The stripe runs through pixel ``spec.centre`` shifted ``shift`` columns
    across (before rotation); ``spec.angle`` rotates it about ``spec.vertex``.
    """
    if stripe_width < 1:
        raise ValueError("stripe_width must be >= 1")
    cx, _ = spec.centre
    lo = cx + shift - (stripe_width - 1) // 2
    hi = lo + stripe_width
    dark, light = float(spec.dark), float(spec.light)

    def pat(i, j):
        return np.where((i >= lo) & (i < hi), light, dark) + 0.0 * j

    img = _rotate_bilinear(pat, spec.width, spec.height, spec.vertex, spec.angle)
    return _finish(img, spec.blur, spec.noise_variance, spec.seed)


def gaussian_samples(shape, seed: int) -> np.ndarray:
    """Standard normal draws: Philox4x64 uniforms through Box-Muller."""
    rng = np.random.Generator(np.random.Philox(seed))
    n = int(np.prod(shape))
    m = (n + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1]
    u2 = rng.random(m)
    rad = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([rad * np.cos(2 * np.pi * u2), rad * np.sin(2 * np.pi * u2)])
    return z[:n].reshape(shape)


def add_noise(image, variance: float, seed: int = 0) -> np.ndarray:
    if variance < 0:
        raise ValueError("variance must be non-negative")
    img = np.asarray(image, dtype=np.uint8)
    if variance == 0:
        return img.copy()
    noisy = img + np.sqrt(variance) * gaussian_samples(img.shape, seed)
    return np.clip(np.floor(noisy + 0.5), 0, 255).astype(np.uint8)


def spec_dict(spec: SynthSpec) -> dict:
    return asdict(spec)


__all__ = [
    "BLURS",
    "BLUR_KERNELS",
    "OFFSET_MODES",
    "SynthSpec",
    "add_noise",
    "board_vertices",
    "gaussian_samples",
    "render_board",
    "render_edge",
    "render_stripe",
    "render_vertex",
]

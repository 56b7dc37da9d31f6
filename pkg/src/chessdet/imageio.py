"""Binary PGM (P5, maxval 255) images and plain-text XYZ point clouds."""

from __future__ import annotations

import os

import numpy as np


class PGMFormatError(ValueError):
    pass


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping # comments.

    Returns the tokens and the offset of the single whitespace byte that
    terminates the last one.
    """
    out: list[bytes] = []
    i, n = 0, len(data)
    while len(out) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i >= n:
            raise PGMFormatError("truncated PGM header")
        if data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
            j += 1
        out.append(data[i:j])
        i = j
    return out, i


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    toks, end = _tokens(data, 4)
    if toks[0] != b"P5":
        raise PGMFormatError(f"not a binary PGM (magic {toks[0]!r})")
    try:
        w, h, maxval = (int(t) for t in toks[1:])
    except ValueError:
        raise PGMFormatError("non-numeric PGM header field") from None
    if w < 1 or h < 1:
        raise PGMFormatError(f"bad PGM dimensions {w}x{h}")
    if maxval != 255:
        raise PGMFormatError(f"unsupported maxval {maxval}; only 8-bit (255) images are handled")
    if end >= len(data) or not data[end : end + 1].isspace():
        raise PGMFormatError("missing whitespace after PGM header")
    start = end + 1
    raw = data[start : start + w * h]
    if len(raw) != w * h:
        raise PGMFormatError(f"truncated PGM data: expected {w * h} bytes, got {len(raw)}")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w).copy()


def save_pgm(image, path) -> None:
    img = np.asarray(image)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2D image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise ValueError("intensities must lie in [0, 255]")
        img = img.astype(np.uint8)
    if not os.fspath(path):
        raise OSError("empty output path")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5 %d %d 255\n" % (w, h))
        fh.write(np.ascontiguousarray(img).tobytes())


def load_xyz(path) -> np.ndarray:
    pts = np.loadtxt(path, dtype=np.float64, ndmin=2, comments="#")
    if pts.shape[1] != 3:
        raise ValueError(f"expected 3 columns (x y z), got {pts.shape[1]}")
    return pts


def save_xyz(points, path) -> None:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 3:
        raise ValueError("expected an (N, 3) array")
    np.savetxt(path, p, fmt="%.17g")

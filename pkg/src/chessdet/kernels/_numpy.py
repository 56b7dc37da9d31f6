"""Vectorised numpy fallbacks for the hot loops (no compilation step)."""

from __future__ import annotations

import numpy as np


def _shifted(a: np.ndarray, m: int, dx: int, dy: int) -> np.ndarray:
    h, w = a.shape
    return a[m + dy : h - m + dy, m + dx : w - m + dx]


def chess_response(img, ring, local, margin):
    h, w = img.shape
    out = np.zeros((h, w), np.int32)
    if h <= 2 * margin or w <= 2 * margin:
        return out
    a = img.astype(np.int32)
    s = [_shifted(a, margin, int(dx), int(dy)) for dx, dy in ring]
    total = np.zeros_like(s[0])
    for v in s:
        total += v
    sr = np.zeros_like(total)
    for n in range(4):
        sr += np.abs(s[n] + s[n + 8] - s[n + 4] - s[n + 12])
    dr = np.zeros_like(total)
    for n in range(8):
        dr += np.abs(s[n] - s[n + 8])
    loc = np.zeros_like(total)
    for dx, dy in local:
        loc += _shifted(a, margin, int(dx), int(dy))
    out[margin : h - margin, margin : w - margin] = 5 * sr - 5 * dr - np.abs(5 * total - 16 * loc)
    return out


def separable_blur(img, taps, denom):
    h, w = img.shape
    r = len(taps) // 2
    a = img.astype(np.int32)
    padded = np.pad(a, ((0, 0), (r, r)), mode="edge")
    tmp = np.zeros((h, w), np.int32)
    for k, t in enumerate(taps):
        tmp += int(t) * padded[:, k : k + w]
    padded = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
    acc = np.zeros((h, w), np.int32)
    for k, t in enumerate(taps):
        acc += int(t) * padded[k : k + h, :]
    d2 = int(denom) * int(denom)
    return ((acc + d2 // 2) // d2).astype(np.uint8)


def harris_response(img, deriv, smooth, norm, k):
    h, w = img.shape
    rd = len(deriv) // 2
    margin = rd + 1
    out = np.zeros((h, w), np.float64)
    if h <= 2 * margin or w <= 2 * margin:
        return out
    f = img.astype(np.float64)
    n = 2 * rd + 1
    dx_h = np.zeros((h, w - 2 * rd))
    sm_h = np.zeros((h, w - 2 * rd))
    for t in range(n):
        col = f[:, t : t + w - 2 * rd]
        dx_h += deriv[t] * col
        sm_h += smooth[t] * col
    gx = np.zeros((h - 2 * rd, w - 2 * rd))
    gy = np.zeros((h - 2 * rd, w - 2 * rd))
    for t in range(n):
        gx += smooth[t] * dx_h[t : t + h - 2 * rd]
        gy += deriv[t] * sm_h[t : t + h - 2 * rd]
    gx *= norm
    gy *= norm
    ixx, iyy, ixy = gx * gx, gy * gy, gx * gy
    hh, ww = ixx.shape
    a = np.zeros((hh - 2, ww - 2))
    b = np.zeros_like(a)
    c = np.zeros_like(a)
    for dy in range(3):
        for dx in range(3):
            a += ixx[dy : dy + hh - 2, dx : dx + ww - 2]
            b += iyy[dy : dy + hh - 2, dx : dx + ww - 2]
            c += ixy[dy : dy + hh - 2, dx : dx + ww - 2]
    tr = a + b
    out[margin : h - margin, margin : w - margin] = (a * b - c * c) - k * tr * tr
    return out


def ptam_corners(img, ring, gate):
    h, w = img.shape
    margin = 3
    out = np.zeros((h, w), bool)
    if h <= 2 * margin or w <= 2 * margin:
        return out
    a = img.astype(np.int32)
    s = [16 * _shifted(a, margin, int(dx), int(dy)) for dx, dy in ring]
    total = np.zeros_like(s[0])
    for v in s:
        total += v
    total //= 16
    hi = total + 16 * gate
    lo = total - 16 * gate
    centre = 16 * _shifted(a, margin, 0, 0)
    state = s[15] > total
    swaps = np.zeros(total.shape, np.int32)
    for v in s:
        down = state & (v < lo)
        up = ~state & (v > hi)
        swaps += down | up
        state = (state & ~down) | up
    ok = (centre > lo) & (centre < hi) & (swaps == 4)
    out[margin : h - margin, margin : w - margin] = ok
    return out


def nms_mask(resp, window):
    h, w = resp.shape
    r = window // 2
    v = resp
    if np.issubdtype(v.dtype, np.floating):
        fill = -np.inf
    else:
        fill = np.iinfo(v.dtype).min
    p = np.pad(v, r, mode="constant", constant_values=fill)
    keep = v > 0
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dx == 0 and dy == 0:
                continue
            u = p[r + dy : r + dy + h, r + dx : r + dx + w]
            if dy < 0 or (dy == 0 and dx < 0):
                keep &= v > u
            else:
                keep &= v >= u
    return keep

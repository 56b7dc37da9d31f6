"""numba-compiled hot loops. Signatures mirror :mod:`chessdet.kernels._numpy`.

The ChESS kernel relies on the ring being point-symmetric (offset n+8 is the
negation of offset n) and on a five-pixel local set whose first entry is the
centre; :func:`chess_response` checks both before entering compiled code.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _chess_kernel(img, ring, local, margin):
    h, w = img.shape
    out = np.zeros((h, w), np.int32)
    a = img.astype(np.int32)
    flat = a.ravel()
    o = out.ravel()
    o0 = ring[0, 1] * w + ring[0, 0]
    o1 = ring[1, 1] * w + ring[1, 0]
    o2 = ring[2, 1] * w + ring[2, 0]
    o3 = ring[3, 1] * w + ring[3, 0]
    o4 = ring[4, 1] * w + ring[4, 0]
    o5 = ring[5, 1] * w + ring[5, 0]
    o6 = ring[6, 1] * w + ring[6, 0]
    o7 = ring[7, 1] * w + ring[7, 0]
    l1 = local[1, 1] * w + local[1, 0]
    l2 = local[2, 1] * w + local[2, 0]
    l3 = local[3, 1] * w + local[3, 0]
    l4 = local[4, 1] * w + local[4, 0]
    for y in range(margin, h - margin):
        base = y * w
        for x in range(margin, w - margin):
            c = base + x
            s0 = flat[c + o0]
            s1 = flat[c + o1]
            s2 = flat[c + o2]
            s3 = flat[c + o3]
            s4 = flat[c + o4]
            s5 = flat[c + o5]
            s6 = flat[c + o6]
            s7 = flat[c + o7]
            s8 = flat[c - o0]
            s9 = flat[c - o1]
            s10 = flat[c - o2]
            s11 = flat[c - o3]
            s12 = flat[c - o4]
            s13 = flat[c - o5]
            s14 = flat[c - o6]
            s15 = flat[c - o7]
            sr = (
                abs(s0 + s8 - s4 - s12)
                + abs(s1 + s9 - s5 - s13)
                + abs(s2 + s10 - s6 - s14)
                + abs(s3 + s11 - s7 - s15)
            )
            dr = (
                abs(s0 - s8) + abs(s1 - s9) + abs(s2 - s10) + abs(s3 - s11)
                + abs(s4 - s12) + abs(s5 - s13) + abs(s6 - s14) + abs(s7 - s15)
            )
            tot = s0 + s1 + s2 + s3 + s4 + s5 + s6 + s7 + s8 + s9 + s10 + s11 + s12 + s13 + s14 + s15
            loc = flat[c] + flat[c + l1] + flat[c + l2] + flat[c + l3] + flat[c + l4]
            o[c] = 5 * sr - 5 * dr - abs(5 * tot - 16 * loc)
    return out


def chess_response(img, ring, local, margin):
    h, w = img.shape
    if h <= 2 * margin or w <= 2 * margin:
        return np.zeros((h, w), np.int32)
    ring = np.ascontiguousarray(ring, dtype=np.int64)
    local = np.ascontiguousarray(local, dtype=np.int64)
    if ring.shape != (16, 2) or not np.array_equal(ring[8:], -ring[:8]):
        raise ValueError("compiled kernel needs a point-symmetric 16-point ring")
    if local.shape != (5, 2) or tuple(local[0]) != (0, 0):
        raise ValueError("compiled kernel needs five local offsets starting at (0, 0)")
    return _chess_kernel(np.ascontiguousarray(img), ring, local, margin)


@njit(cache=True)
def separable_blur(img, taps, denom):
    h, w = img.shape
    r = taps.shape[0] // 2
    a = img.astype(np.int32)
    tmp = np.empty((h, w), np.int32)
    for y in range(h):
        for x in range(w):
            acc = 0
            if r <= x < w - r:
                for k in range(-r, r + 1):
                    acc += taps[k + r] * a[y, x + k]
            else:
                for k in range(-r, r + 1):
                    acc += taps[k + r] * a[y, min(max(x + k, 0), w - 1)]
            tmp[y, x] = acc
    d2 = denom * denom
    half = d2 // 2
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        if r <= y < h - r:
            for x in range(w):
                acc = 0
                for k in range(-r, r + 1):
                    acc += taps[k + r] * tmp[y + k, x]
                out[y, x] = (acc + half) // d2
        else:
            for x in range(w):
                acc = 0
                for k in range(-r, r + 1):
                    acc += taps[k + r] * tmp[min(max(y + k, 0), h - 1), x]
                out[y, x] = (acc + half) // d2
    return out


@njit(cache=True)
def _harris_sobel5(img, k):
    # taps hard-coded: derivative [-1 -2 0 2 1], smoothing [1 4 6 4 1]
    h, w = img.shape
    a = img.astype(np.int32)
    dxh = np.zeros((h, w), np.int32)
    smh = np.zeros((h, w), np.int32)
    for y in range(h):
        for x in range(2, w - 2):
            m2 = a[y, x - 2]
            m1 = a[y, x - 1]
            c0 = a[y, x]
            p1 = a[y, x + 1]
            p2 = a[y, x + 2]
            dxh[y, x] = (p2 - m2) + 2 * (p1 - m1)
            smh[y, x] = m2 + p2 + 4 * (m1 + p1) + 6 * c0
    bxx = np.zeros((h, w))
    byy = np.zeros((h, w))
    bxy = np.zeros((h, w))
    gxr = np.zeros(w)
    gyr = np.zeros(w)
    nrm = 1.0 / 128.0
    for y in range(2, h - 2):
        for x in range(2, w - 2):
            gx = dxh[y - 2, x] + dxh[y + 2, x] + 4 * (dxh[y - 1, x] + dxh[y + 1, x]) + 6 * dxh[y, x]
            gy = (smh[y + 2, x] - smh[y - 2, x]) + 2 * (smh[y + 1, x] - smh[y - 1, x])
            gxr[x] = gx * nrm
            gyr[x] = gy * nrm
        for x in range(3, w - 3):
            u0 = gxr[x - 1]
            u1 = gxr[x]
            u2 = gxr[x + 1]
            v0 = gyr[x - 1]
            v1 = gyr[x]
            v2 = gyr[x + 1]
            bxx[y, x] = u0 * u0 + u1 * u1 + u2 * u2
            byy[y, x] = v0 * v0 + v1 * v1 + v2 * v2
            bxy[y, x] = u0 * v0 + u1 * v1 + u2 * v2
    out = np.zeros((h, w))
    for y in range(3, h - 3):
        for x in range(3, w - 3):
            sa = bxx[y - 1, x] + bxx[y, x] + bxx[y + 1, x]
            sb = byy[y - 1, x] + byy[y, x] + byy[y + 1, x]
            sc = bxy[y - 1, x] + bxy[y, x] + bxy[y + 1, x]
            tr = sa + sb
            out[y, x] = (sa * sb - sc * sc) - k * tr * tr
    return out


@njit(cache=True)
def _harris_generic(img, deriv, smooth, norm, k):
    h, w = img.shape
    rd = deriv.shape[0] // 2
    n = 2 * rd + 1
    margin = rd + 1
    f = img.astype(np.float64)
    dxh = np.zeros((h, w))
    smh = np.zeros((h, w))
    for y in range(h):
        for x in range(rd, w - rd):
            p = 0.0
            q = 0.0
            for t in range(n):
                v = f[y, x + t - rd]
                p += deriv[t] * v
                q += smooth[t] * v
            dxh[y, x] = p
            smh[y, x] = q
    bxx = np.zeros((h, w))
    byy = np.zeros((h, w))
    bxy = np.zeros((h, w))
    gxr = np.zeros(w)
    gyr = np.zeros(w)
    for y in range(rd, h - rd):
        for x in range(rd, w - rd):
            gx = 0.0
            gy = 0.0
            for t in range(n):
                gx += smooth[t] * dxh[y + t - rd, x]
                gy += deriv[t] * smh[y + t - rd, x]
            gxr[x] = gx * norm
            gyr[x] = gy * norm
        for x in range(margin, w - margin):
            sa = 0.0
            sb = 0.0
            sc = 0.0
            for dx in range(-1, 2):
                u = gxr[x + dx]
                v = gyr[x + dx]
                sa += u * u
                sb += v * v
                sc += u * v
            bxx[y, x] = sa
            byy[y, x] = sb
            bxy[y, x] = sc
    out = np.zeros((h, w))
    for y in range(margin, h - margin):
        for x in range(margin, w - margin):
            sa = bxx[y - 1, x] + bxx[y, x] + bxx[y + 1, x]
            sb = byy[y - 1, x] + byy[y, x] + byy[y + 1, x]
            sc = bxy[y - 1, x] + bxy[y, x] + bxy[y + 1, x]
            tr = sa + sb
            out[y, x] = (sa * sb - sc * sc) - k * tr * tr
    return out


def harris_response(img, deriv, smooth, norm, k):
    h, w = img.shape
    margin = len(deriv) // 2 + 1
    if h <= 2 * margin or w <= 2 * margin:
        return np.zeros((h, w))
    img = np.ascontiguousarray(img)
    if (
        list(deriv) == [-1.0, -2.0, 0.0, 2.0, 1.0]
        and list(smooth) == [1.0, 4.0, 6.0, 4.0, 1.0]
        and norm == 1.0 / 128.0
    ):
        return _harris_sobel5(img, float(k))
    return _harris_generic(img, np.asarray(deriv, np.float64), np.asarray(smooth, np.float64), float(norm), float(k))


@njit(cache=True)
def _ptam_kernel(img, ring, gate):
    h, w = img.shape
    margin = 3
    out = np.zeros((h, w), np.bool_)
    a = img.astype(np.int32)
    flat = a.ravel()
    o = out.ravel()
    ro = np.empty(16, np.int64)
    for n in range(16):
        ro[n] = ring[n, 1] * w + ring[n, 0]
    g16 = 16 * gate
    for y in range(margin, h - margin):
        base = y * w
        for x in range(margin, w - margin):
            c = base + x
            total = 0
            for n in range(16):
                total += flat[c + ro[n]]
            hi = total + g16
            lo = total - g16
            centre = 16 * flat[c]
            if centre <= lo or centre >= hi:
                continue
            state = 16 * flat[c + ro[15]] > total
            swaps = 0
            for n in range(16):
                v = 16 * flat[c + ro[n]]
                if state:
                    if v < lo:
                        state = False
                        swaps += 1
                elif v > hi:
                    state = True
                    swaps += 1
            if swaps == 4:
                o[c] = True
    return out


def ptam_corners(img, ring, gate):
    h, w = img.shape
    if h <= 6 or w <= 6:
        return np.zeros((h, w), bool)
    return _ptam_kernel(np.ascontiguousarray(img), np.ascontiguousarray(ring, dtype=np.int64), int(gate))


@njit(cache=True)
def nms_mask(resp, window):
    h, w = resp.shape
    r = window // 2
    out = np.zeros((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            v = resp[y, x]
            if not v > 0:
                continue
            keep = True
            for dy in range(-r, r + 1):
                yy = y + dy
                if yy < 0 or yy >= h:
                    continue
                for dx in range(-r, r + 1):
                    xx = x + dx
                    if xx < 0 or xx >= w or (dx == 0 and dy == 0):
                        continue
                    u = resp[yy, xx]
                    if u > v:
                        keep = False
                        break
                    # equal values: the earlier (row-major) position wins
                    if u == v and (dy < 0 or (dy == 0 and dx < 0)):
                        keep = False
                        break
                if not keep:
                    break
            out[y, x] = keep
    return out

"""Plane and cylinder fits for surface-consistency statistics.

The cylinder model is the algebraic cost

    E(C, V, s) = sum_i ( s * (X_i - C)^T (|V|^2 I - V V^T) (X_i - C) - 1 )^2

with ``C`` a point on the axis, ``V`` a non-unit axis direction and
``s = 1 / (r |V|)^2``. The cost is unchanged by ``(V, s) -> (kV, s/k^2)`` and
by sliding ``C`` along the axis; the optimiser pins both gauges after every
accepted step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class RankError(ValueError):
    """Points do not span a plane."""


class CylinderFitError(RuntimeError):
    def __init__(self, message: str, last: "CylinderFit"):
        super().__init__(message)
        self.last = last


@dataclass(frozen=True)
class PlaneFit:
    normal: np.ndarray
    centroid: np.ndarray
    sse: float


@dataclass(frozen=True)
class CylinderFit:
    C: np.ndarray
    V: np.ndarray
    s: float
    residual: float = float("nan")
    iterations: int = 0

    @property
    def r(self) -> float:
        return 1.0 / (np.linalg.norm(self.V) * np.sqrt(self.s))

    @property
    def axis(self) -> np.ndarray:
        return self.V / np.linalg.norm(self.V)

    @classmethod
    def from_radius(cls, C, V, r: float) -> "CylinderFit":
        V = np.asarray(V, dtype=np.float64)
        if r <= 0:
            raise ValueError("radius must be positive")
        return cls(np.asarray(C, dtype=np.float64), V, 1.0 / (r * np.linalg.norm(V)) ** 2)


def _points(points) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 3:
        raise ValueError(f"expected an (N, 3) point array, got shape {p.shape}")
    return p


def _orient_normal(n: np.ndarray) -> np.ndarray:
    # prefer +z, then +y, then +x
    for k in (2, 1, 0):
        if n[k] > 0:
            return n
        if n[k] < 0:
            return -n
    return n


def fit_plane_tls(points) -> PlaneFit:
    """Orthogonal-regression plane: least-variance principal axis of the points."""
    p = _points(points)
    if len(p) < 3:
        raise RankError("need at least 3 points")
    centroid = p.mean(axis=0)
    d = p - centroid
    _, sv, vt = np.linalg.svd(d, full_matrices=False)
    scale = max(sv[0], np.finfo(float).tiny)
    if sv[1] <= 1e-12 * scale:
        raise RankError("points are collinear (or coincident)")
    normal = _orient_normal(vt[2] / np.linalg.norm(vt[2]))
    sse = float(((d @ normal) ** 2).sum())
    return PlaneFit(normal=normal, centroid=centroid, sse=sse)


def _check_cyl(V, s):
    V = np.asarray(V, dtype=np.float64)
    if not np.linalg.norm(V) > 0:
        raise ValueError("axis vector V must be non-zero")
    if not s > 0:
        raise ValueError("s must be positive")
    return V


def cylinder_residuals(C, V, s, points) -> np.ndarray:
    p = _points(points)
    V = _check_cyl(V, s)
    d = p - np.asarray(C, dtype=np.float64)
    vd = d @ V
    q = (V @ V) * np.einsum("ij,ij->i", d, d) - vd * vd
    return s * q - 1.0


def cylinder_cost(C, V, s, points) -> float:
    r = cylinder_residuals(C, V, s, points)
    return float(r @ r)


def cylinder_jacobian(C, V, s, points) -> np.ndarray:
    """d(residual_i)/d(C, V, s) as an (N, 7) array."""
    p = _points(points)
    V = _check_cyl(V, s)
    d = p - np.asarray(C, dtype=np.float64)
    vd = d @ V
    vv = V @ V
    dd = np.einsum("ij,ij->i", d, d)
    J = np.empty((len(p), 7))
    J[:, 0:3] = -2.0 * s * (vv * d - vd[:, None] * V[None, :])
    J[:, 3:6] = 2.0 * s * (dd[:, None] * V[None, :] - vd[:, None] * d)
    J[:, 6] = vv * dd - vd * vd
    return J


def cylinder_gradient(C, V, s, points) -> np.ndarray:
    return 2.0 * cylinder_jacobian(C, V, s, points).T @ cylinder_residuals(C, V, s, points)


def _pin_gauge(C, V, s, v_norm, centroid):
    k = v_norm / np.linalg.norm(V)
    V = V * k
    s = s / (k * k)
    C = C + ((centroid - C) @ V) / (V @ V) * V
    return C, V, s


def fit_cylinder(
    points, init: CylinderFit, *, max_iter: int = 200, rtol: float = 1e-10
) -> CylinderFit:
    """Levenberg-Marquardt on the seven cylinder parameters.

    Stops when an accepted step lowers the cost by less than ``rtol`` relative,
    when the cost is numerically zero, or when damping saturates (no
    improving step exists). Exceeding ``max_iter`` raises
    :class:`CylinderFitError` carrying the last iterate.
    """
    p = _points(points)
    if len(p) < 7:
        raise ValueError("need at least 7 points for a cylinder fit")
    C = np.asarray(init.C, dtype=np.float64).copy()
    V = _check_cyl(init.V, init.s).copy()
    s = float(init.s)
    v_norm = float(np.linalg.norm(V))
    centroid = p.mean(axis=0)
    C, V, s = _pin_gauge(C, V, s, v_norm, centroid)
    res = cylinder_residuals(C, V, s, p)
    cost = float(res @ res)
    tiny = 1e-28 * len(p)
    lam = 1e-3
    for it in range(1, max_iter + 1):
        if cost <= tiny:
            return CylinderFit(C, V, s, cost, it - 1)
        J = cylinder_jacobian(C, V, s, p)
        A = J.T @ J
        g = J.T @ res
        diag = np.maximum(np.diag(A), 1e-12 * max(np.diag(A).max(), 1e-300))
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            nC, nV, ns = C + step[0:3], V + step[3:6], s + step[6]
            if ns <= 0 or not np.linalg.norm(nV) > 0:
                lam *= 10.0
                continue
            nC, nV, ns = _pin_gauge(nC, nV, ns, v_norm, centroid)
            nres = cylinder_residuals(nC, nV, ns, p)
            ncost = float(nres @ nres)
            if ncost < cost:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            return CylinderFit(C, V, s, cost, it - 1)
        decrease = (cost - ncost) / cost
        C, V, s, res, cost = nC, nV, ns, nres, ncost
        lam = max(lam / 10.0, 1e-12)
        if decrease < rtol:
            return CylinderFit(C, V, s, cost, it)
    raise CylinderFitError(
        f"cylinder fit did not converge in {max_iter} iterations (cost {cost:.3e})",
        CylinderFit(C, V, s, cost, max_iter),
    )


def initial_cylinder_guess(points) -> CylinderFit:
    """Crude start: axis along the largest principal direction through the centroid."""
    p = _points(points)
    c = p.mean(axis=0)
    _, _, vt = np.linalg.svd(p - c, full_matrices=False)
    axis = vt[0]
    d = p - c
    radial = d - np.outer(d @ axis, axis)
    r = float(np.linalg.norm(radial, axis=1).mean())
    return CylinderFit.from_radius(c, axis, r)


@dataclass(frozen=True)
class FrameStats:
    mean_distance: float
    var_distance: float
    mean_sse: float
    var_sse: float

    def relative_to(self, baseline: "FrameStats") -> "FrameStats":
        def ratio(a, b):
            return a / b if b != 0 else (1.0 if a == 0 else float("inf"))

        return FrameStats(
            ratio(self.mean_distance, baseline.mean_distance),
            ratio(self.var_distance, baseline.var_distance),
            ratio(self.mean_sse, baseline.mean_sse),
            ratio(self.var_sse, baseline.var_sse),
        )


def frame_stats(vectors, sses=None) -> FrameStats:
    """Spread of per-frame unit vectors about their normalised mean.

    Distances are chord lengths between unit vectors (the angle in radians,
    to first order). Variances are population variances.
    """
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] != 3 or len(v) < 2:
        raise ValueError("need at least two 3-vectors")
    u = v / np.linalg.norm(v, axis=1, keepdims=True)
    m = u.mean(axis=0)
    nm = np.linalg.norm(m)
    if nm < 1e-12:
        raise ValueError("frame vectors cancel out; mean direction undefined")
    m = m / nm
    dist = np.linalg.norm(u - m, axis=1)
    if sses is None:
        e = np.zeros(len(v))
    else:
        e = np.asarray(sses, dtype=np.float64)
    return FrameStats(float(dist.mean()), float(dist.var()), float(e.mean()), float(e.var()))


def fits_frame_stats(fits) -> FrameStats:
    """``frame_stats`` over a list of PlaneFit (normals) or CylinderFit (axes)."""
    fits = list(fits)
    if all(isinstance(f, PlaneFit) for f in fits):
        return frame_stats([f.normal for f in fits], [f.sse for f in fits])
    if all(isinstance(f, CylinderFit) for f in fits):
        axes = np.array([f.axis for f in fits])
        # axis sign is arbitrary; align to the first frame
        axes *= np.sign(axes @ axes[0])[:, None]
        return frame_stats(axes, [f.residual for f in fits])
    raise TypeError("fits must be all PlaneFit or all CylinderFit")

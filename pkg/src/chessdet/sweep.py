"""Rotation x noise accuracy sweeps and the throughput benchmark."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .baselines import HarrisParams, PtamParams, harris_detect, ptam_detect
from .detector import detect, pre_blur
from .select import isolated_positive_mask, subpixel_com
from .synth import SynthSpec, add_noise, render_vertex

LOCALIZATIONS = ("integer_argmax", "com5x5")
DETECTORS = ("chess", "chess_blur5", "harris", "harris_noblur")
BINARY_DETECTORS = ("ptam", "chess_thresh")
BINARY_CAP_PX = 5.0


def default_angles() -> list[float]:
    return [2.5 * i for i in range(37)]


def default_variances() -> list[float]:
    return [0.5 * i for i in range(21)]


@dataclass
class SweepConfig:
    angles: list[float] = field(default_factory=default_angles)
    noise_variances: list[float] = field(default_factory=default_variances)
    detector: str = "chess"
    offset_mode: str = "grid_aligned"
    localization: str = "com5x5"
    trials_per_cell: int = 5
    seed: int = 0
    gate: int = 10
    threshold_fraction: float = 0.015
    width: int = 640
    height: int = 480
    backend: str | None = None

    def validate(self, binary: bool = False) -> None:
        if not self.angles or not self.noise_variances:
            raise ValueError("angles and noise_variances must be non-empty")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")
        if self.localization not in LOCALIZATIONS:
            raise ValueError(f"localization must be one of {LOCALIZATIONS}")
        allowed = BINARY_DETECTORS if binary else DETECTORS
        if self.detector not in allowed:
            raise ValueError(f"detector {self.detector!r} not valid here; expected one of {allowed}")


@dataclass
class ErrorGrid:
    angles: np.ndarray
    noise_variances: np.ndarray
    errors: np.ndarray  # (n_angles, n_variances); NaN where every trial failed
    trials: np.ndarray  # successful trials per cell
    failures: np.ndarray
    detector: str = ""

    def to_csv(self) -> str:
        lines = ["angle_deg,noise_var,mean_error_px,trials"]
        for i, a in enumerate(self.angles):
            for j, v in enumerate(self.noise_variances):
                e = self.errors[i, j]
                es = "nan" if np.isnan(e) else f"{e:.6f}"
                lines.append(f"{a:g},{v:g},{es},{int(self.trials[i, j])}")
        return "\n".join(lines) + "\n"

    def mean_over_angles(self) -> np.ndarray:
        return np.nanmean(self.errors, axis=0)

    def noise_tolerance(self, limit: float = 1.0) -> float:
        """Largest variance whose angle-averaged error stays below ``limit``.

        Scans upward and stops at the first variance that breaks the limit;
        returns -inf if even the first one does.
        """
        best = -math.inf
        for v, e in zip(self.noise_variances, self.mean_over_angles()):
            if not e < limit:
                break
            best = float(v)
        return best


def cell_seed(seed: int, ai: int, vi: int, trial: int) -> int:
    """Independent, order-insensitive seed for one (angle, variance, trial)."""
    ss = np.random.SeedSequence([seed, ai, vi, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def response_for(name: str, image: np.ndarray, backend: str | None = None) -> np.ndarray:
    if name == "chess":
        return detect(image, backend=backend)
    if name == "chess_blur5":
        return detect(pre_blur(image, "gauss5", backend=backend), backend=backend)
    if name == "harris":
        return harris_detect(image, HarrisParams(pre_blur=True), backend=backend)
    if name == "harris_noblur":
        return harris_detect(image, HarrisParams(pre_blur=False), backend=backend)
    raise ValueError(f"unknown detector {name!r}")


def localize(resp: np.ndarray, mode: str = "com5x5") -> tuple[float, float] | None:
    """Greatest response that has at least one positive 8-neighbour.

    Returns None when no such pixel exists.
    """
    r = np.where(isolated_positive_mask(resp), 0, resp)
    idx = int(np.argmax(r))
    h, w = r.shape
    y, x = divmod(idx, w)
    if not r[y, x] > 0:
        return None
    if mode == "integer_argmax":
        return float(x), float(y)
    if 2 <= x < w - 2 and 2 <= y < h - 2:
        return subpixel_com(r, x, y)
    return float(x), float(y)


def _spec(cfg: SweepConfig, angle: float, variance: float, seed: int) -> SynthSpec:
    return SynthSpec(
        angle=angle,
        offset_mode=cfg.offset_mode,
        noise_variance=variance,
        seed=seed,
        blur="gauss3",
        width=cfg.width,
        height=cfg.height,
    )


def _empty(cfg: SweepConfig):
    shape = (len(cfg.angles), len(cfg.noise_variances))
    return np.zeros(shape), np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)


def _grid(cfg: SweepConfig, name: str, sums, counts, fails) -> ErrorGrid:
    with np.errstate(invalid="ignore", divide="ignore"):
        errors = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return ErrorGrid(
        np.asarray(cfg.angles, dtype=np.float64),
        np.asarray(cfg.noise_variances, dtype=np.float64),
        errors,
        counts,
        fails,
        name,
    )


def run_sweeps(cfg: SweepConfig, detectors: Sequence[str]) -> dict[str, ErrorGrid]:
    """Several detectors over one sweep.

    The noiseless image is rendered once per angle; each trial adds its own
    noise field to it, which is exactly what ``render_vertex`` would produce
    for that trial's spec.
    """
    for d in detectors:
        SweepConfig(detector=d).validate()
    cfg.validate()
    acc = {d: _empty(cfg) for d in detectors}
    for ai, angle in enumerate(cfg.angles):
        clean, (gx, gy) = render_vertex(_spec(cfg, angle, 0.0, 0))
        for vi, var in enumerate(cfg.noise_variances):
            for t in range(cfg.trials_per_cell):
                img = add_noise(clean, var, cell_seed(cfg.seed, ai, vi, t))
                for d in detectors:
                    sums, counts, fails = acc[d]
                    try:
                        loc = localize(response_for(d, img, cfg.backend), cfg.localization)
                    except (ValueError, IndexError):
                        loc = None
                    if loc is None:
                        fails[ai, vi] += 1
                        continue
                    sums[ai, vi] += math.hypot(loc[0] - gx, loc[1] - gy)
                    counts[ai, vi] += 1
    return {d: _grid(cfg, d, *acc[d]) for d in detectors}


def run_sweep(cfg: SweepConfig) -> ErrorGrid:
    return run_sweeps(cfg, [cfg.detector])[cfg.detector]


def binary_mask_for(cfg: SweepConfig, image: np.ndarray, gate: int | None = None) -> np.ndarray:
    """Boolean detections after the shared sigma=1 pre-blur."""
    if cfg.detector == "ptam":
        return ptam_detect(image, PtamParams(gate=gate or cfg.gate, pre_blur_sigma=1.0), backend=cfg.backend)
    resp = detect(pre_blur(image, "gauss5", backend=cfg.backend), backend=cfg.backend)
    top = resp.max()
    if top <= 0:
        return np.zeros(resp.shape, dtype=bool)
    return resp > cfg.threshold_fraction * top


def nearest_detection(mask: np.ndarray, gx: float, gy: float, cap: float = BINARY_CAP_PX) -> float:
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        return cap
    return float(min(cap, np.hypot(xs - gx, ys - gy).min()))


def run_binary_sweep(cfg: SweepConfig) -> ErrorGrid:
    """Nearest-detection distance (capped at 5 px) for boolean detectors."""
    cfg.validate(binary=True)
    if cfg.offset_mode != "grid_aligned":
        raise ValueError("binary comparison uses grid-aligned features only")
    sums, counts, fails = _empty(cfg)
    for ai, angle in enumerate(cfg.angles):
        clean, (gx, gy) = render_vertex(_spec(cfg, angle, 0.0, 0))
        for vi, var in enumerate(cfg.noise_variances):
            for t in range(cfg.trials_per_cell):
                img = add_noise(clean, var, cell_seed(cfg.seed, ai, vi, t))
                d = nearest_detection(binary_mask_for(cfg, img), gx, gy)
                sums[ai, vi] += d
                counts[ai, vi] += 1
    return _grid(cfg, cfg.detector, sums, counts, fails)


@dataclass(frozen=True)
class BenchResult:
    detector: str
    loops: int
    total_s: float
    backend: str

    @property
    def fps(self) -> float:
        return self.loops / self.total_s if self.total_s > 0 else float("inf")

    def summary(self) -> str:
        return (
            f"{self.detector}: {self.loops} loops in {self.total_s:.3f} s "
            f"({self.fps:.1f} frames/s, backend {self.backend})"
        )

    def key_values(self) -> str:
        return (
            f"detector={self.detector}\nbackend={self.backend}\nloops={self.loops}\n"
            f"total_s={self.total_s:.6f}\nfps={self.fps:.3f}\n"
        )


def bench_callable(name: str, backend: str | None = None) -> Callable[[np.ndarray], object]:
    if name in DETECTORS:
        return lambda img: response_for(name, img, backend)
    if name == "ptam":
        p = PtamParams(gate=10)
        return lambda img: ptam_detect(img, p, backend=backend)
    if name == "ptam_noblur":
        p = PtamParams(gate=10, pre_blur_sigma=0)
        return lambda img: ptam_detect(img, p, backend=backend)
    raise ValueError(f"unknown benchmark detector {name!r}")


def bench_frame(width: int = 640, height: int = 480, seed: int = 7) -> np.ndarray:
    """Fixed VGA test frame: a rotated 9x7 board with mild noise."""
    from .synth import render_board

    spec = SynthSpec(width=width, height=height, noise_variance=2.0, seed=seed)
    img, _ = render_board(7, 9, min(width, height) // 9, 10.0, spec)
    return img


def benchmark(detector: str, frame: np.ndarray, loops: int = 500, backend: str | None = None) -> BenchResult:
    """Wall-clock time of ``loops`` full-frame detections (one warm-up call excluded)."""
    from ._backend import resolve

    if loops < 1:
        raise ValueError("loops must be >= 1")
    fn = bench_callable(detector, backend)
    frame = np.ascontiguousarray(frame, dtype=np.uint8)
    fn(frame)
    t0 = time.perf_counter()
    for _ in range(loops):
        fn(frame)
    return BenchResult(detector, loops, time.perf_counter() - t0, resolve(backend))

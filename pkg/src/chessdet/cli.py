"""Command-line entry point: ``chessdet <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .geomfit import (
    CylinderFit,
    fit_cylinder,
    fit_plane_tls,
    initial_cylinder_guess,
)
from .imageio import load_pgm, load_xyz, save_pgm
from .pipeline import features_to_csv, find_features
from .select import SelectConfig
from .sweep import (
    BINARY_DETECTORS,
    DETECTORS,
    LOCALIZATIONS,
    SweepConfig,
    bench_frame,
    benchmark,
    run_binary_sweep,
    run_sweep,
)
from .synth import BLURS, OFFSET_MODES, SynthSpec, render_board, render_vertex


def _floats(text: str) -> list[float]:
    """Either a comma list ``0,2.5,5`` or a range ``start:stop:step`` (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise argparse.ArgumentTypeError(f"bad range {text!r}; use start:stop:step")
        start, stop, step = parts
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(max(n, 0))]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _add_sweep_args(p: argparse.ArgumentParser, detectors, default_detector: str) -> None:
    d = SweepConfig()
    p.add_argument("--angles", type=_floats, default=None, help="degrees; list or start:stop:step (default 0:90:2.5)")
    p.add_argument("--noise-variances", type=_floats, default=None, help="default 0:10:0.5")
    p.add_argument("--detector", choices=detectors, default=default_detector)
    p.add_argument("--offset-mode", choices=OFFSET_MODES, default=d.offset_mode)
    p.add_argument("--trials-per-cell", type=int, default=d.trials_per_cell)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--width", type=int, default=d.width)
    p.add_argument("--height", type=int, default=d.height)
    p.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto")
    p.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")


def _sweep_config(args) -> SweepConfig:
    cfg = SweepConfig(
        detector=args.detector,
        offset_mode=args.offset_mode,
        trials_per_cell=args.trials_per_cell,
        seed=args.seed,
        width=args.width,
        height=args.height,
        backend=args.backend,
    )
    if args.angles is not None:
        cfg = replace(cfg, angles=args.angles)
    if args.noise_variances is not None:
        cfg = replace(cfg, noise_variances=args.noise_variances)
    for name in ("localization", "gate", "threshold_fraction"):
        if hasattr(args, name):
            cfg = replace(cfg, **{name: getattr(args, name)})
    return cfg


def cmd_sweep(args) -> int:
    _write(run_sweep(_sweep_config(args)).to_csv(), args.output)
    return 0


def cmd_binary_sweep(args) -> int:
    _write(run_binary_sweep(_sweep_config(args)).to_csv(), args.output)
    return 0


def cmd_bench(args) -> int:
    frame = load_pgm(args.frame) if args.frame else bench_frame()
    res = benchmark(args.detector, frame, loops=args.loops, backend=args.backend)
    print(res.summary())
    sys.stdout.write(res.key_values())
    return 0


def cmd_render(args) -> int:
    spec = SynthSpec(
        angle=args.angle,
        offset_mode=args.offset_mode,
        dark=args.dark,
        light=args.light,
        noise_variance=args.noise_variance,
        seed=args.seed,
        blur=args.blur,
        width=args.width,
        height=args.height,
    )
    if args.board:
        rows, cols = args.board
        img, verts = render_board(rows, cols, args.square, args.angle, spec)
    else:
        img, v = render_vertex(spec)
        verts = np.array([v])
    save_pgm(img, args.output)
    if args.truth:
        lines = ["x,y"] + [f"{x:.10g},{y:.10g}" for x, y in verts]
        _write("\n".join(lines) + "\n", args.truth)
    return 0


def cmd_detect(args) -> int:
    img = load_pgm(args.image)
    cfg = SelectConfig(
        nms_window=args.nms_window,
        neighbourhood_area=args.neighbourhood_area,
        neighbourhood_proportion=args.neighbourhood_proportion,
        require_connectivity=not args.no_connectivity,
    )
    blur = None if args.blur == "none" else args.blur
    feats = find_features(img, radius=args.radius, blur=blur, cfg=cfg, backend=args.backend)
    _write(features_to_csv(feats), args.output)
    return 0


def _vec(v) -> str:
    return " ".join(f"{x:.17g}" for x in v)


def cmd_fit_plane(args) -> int:
    fit = fit_plane_tls(load_xyz(args.points))
    print(f"normal={_vec(fit.normal)}")
    print(f"centroid={_vec(fit.centroid)}")
    print(f"sse={fit.sse:.17g}")
    return 0


def cmd_fit_cylinder(args) -> int:
    pts = load_xyz(args.points)
    if args.init_axis_point is not None:
        if args.init_axis is None or args.init_radius is None:
            raise ValueError("--init-axis-point needs --init-axis and --init-radius")
        init = CylinderFit.from_radius(args.init_axis_point, args.init_axis, args.init_radius)
    else:
        init = initial_cylinder_guess(pts)
    fit = fit_cylinder(pts, init, max_iter=args.max_iter)
    print(f"C={_vec(fit.C)}")
    print(f"V={_vec(fit.V)}")
    print(f"s={fit.s:.17g}")
    print(f"r={fit.r:.17g}")
    print(f"cost={fit.residual:.17g}")
    print(f"iterations={fit.iterations}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chessdet", description="ChESS vertex detector tools")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="rotation x noise localization error grid (CSV)")
    _add_sweep_args(p, DETECTORS, "chess")
    p.add_argument("--localization", choices=LOCALIZATIONS, default="com5x5")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("binary-sweep", help="nearest-detection distance grid for boolean detectors (CSV)")
    _add_sweep_args(p, BINARY_DETECTORS, "chess_thresh")
    p.add_argument("--gate", type=int, default=10, help="PTAM gate")
    p.add_argument("--threshold-fraction", type=float, default=0.015, help="chess threshold as a fraction of the max")
    p.set_defaults(func=cmd_binary_sweep)

    p = sub.add_parser("bench", help="full-frame throughput")
    p.add_argument("--detector", default="chess", choices=DETECTORS + ("ptam", "ptam_noblur"))
    p.add_argument("--loops", type=int, default=500)
    p.add_argument("--frame", default=None, help="PGM frame (default: built-in synthetic VGA board)")
    p.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="write a synthetic vertex or board as PGM")
    d = SynthSpec()
    p.add_argument("output")
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--offset-mode", choices=OFFSET_MODES, default=d.offset_mode)
    p.add_argument("--dark", type=int, default=d.dark)
    p.add_argument("--light", type=int, default=d.light)
    p.add_argument("--noise-variance", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blur", choices=BLURS, default=d.blur)
    p.add_argument("--width", type=int, default=d.width)
    p.add_argument("--height", type=int, default=d.height)
    p.add_argument("--board", type=int, nargs=2, metavar=("ROWS", "COLS"), default=None)
    p.add_argument("--square", type=int, default=40)
    p.add_argument("--truth", default=None, help="write ground-truth vertices as CSV here")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("detect", help="detect features in a PGM, print CSV")
    c = SelectConfig()
    p.add_argument("image")
    p.add_argument("--radius", type=int, choices=(5, 10), default=5)
    p.add_argument("--blur", choices=BLURS, default="none")
    p.add_argument("--nms-window", type=int, default=c.nms_window)
    p.add_argument("--neighbourhood-area", type=int, default=c.neighbourhood_area)
    p.add_argument("--neighbourhood-proportion", type=float, default=c.neighbourhood_proportion)
    p.add_argument("--no-connectivity", action="store_true")
    p.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("fit-plane", help="total-least-squares plane through an XYZ file")
    p.add_argument("points")
    p.set_defaults(func=cmd_fit_plane)

    p = sub.add_parser("fit-cylinder", help="cylinder fit to an XYZ file")
    p.add_argument("points")
    p.add_argument("--init-axis-point", type=float, nargs=3, default=None)
    p.add_argument("--init-axis", type=float, nargs=3, default=None)
    p.add_argument("--init-radius", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_fit_cylinder)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"chessdet {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

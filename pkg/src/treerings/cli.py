"""Command-line interface: synth, pith, polar, rings, score, sweep, pipeline.

Every stage parameter has a flag; ``--params-json FILE`` loads the same
parameters from a JSON object (flags override the file, the file overrides
built-in defaults). Exit status: 0 success, 1 processing error (message names
the failing stage), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path


from . import evaluate, image, pith, polar, rings, synth
from .errors import TreeRingError


def _float_list(value):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).split(",") if v.strip() != ""]


def _xy(value):
    if isinstance(value, (list, tuple)):
        x, y = value
        return float(x), float(y)
    parts = str(value).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'X,Y', got {value!r}")
    return float(parts[0]), float(parts[1])


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _stage_error(stage: str, exc: Exception) -> int:
    print(f"error [{stage}]: {exc}", file=sys.stderr)
    return 1


def _require_file(path, what: str):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"{what} not found: {p}")
    return p


def _write_text(path, text: str) -> None:
    Path(path).write_text(text)


def _emit(text: str, out) -> None:
    if out:
        _write_text(out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- synth


def _cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = synth.DiskSpec(
        width=args.width,
        height=args.height,
        center=_xy(args.center),
        radii=tuple(_float_list(args.radii)),
        ring_width=args.ring_width,
        ring_amplitude=args.ring_amplitude,
        base_intensity=args.base_intensity,
        background_intensity=args.background_intensity,
        crack=(math.radians(args.crack_angle), args.crack_width)
        if args.crack_angle is not None
        else None,
        noise_amplitude=args.noise,
        seed=args.seed,
        valleys=args.valleys,
    )
    try:
        stack, truths = synth.generate_stack(spec, args.slices, _xy(args.drift))
        for z, sl in enumerate(stack):
            image.save_image(out_dir / f"slice_{z:04d}.png", sl, depth=args.depth)
    except (TreeRingError, ValueError) as exc:
        return _stage_error("synth", exc)
    _write_text(out_dir / "truth.json", synth.truth_to_json(truths, spec))
    _write_text(out_dir / "radii.txt", synth.radii_to_text(spec.radii))
    return 0


# ---------------------------------------------------------------- pith


def _estimate_pith(stack, args) -> pith.PithEstimate:
    centers = []
    for z, sl in enumerate(stack):
        mask = image.foreground_mask(sl, args.mask_frac)
        cx, cy = pith.locate_center(sl, mask, args.sigma, args.min_count)
        centers.append((z, cx, cy))
    return pith.fit_center_line(centers)


def _pith_records(estimate: pith.PithEstimate) -> str:
    fit = {
        "x": list(estimate.fit_params["x"]),
        "y": list(estimate.fit_params["y"]),
    }
    lines = []
    for i, z in enumerate(estimate.z):
        rec = {
            "z": int(z),
            "raw": [float(v) for v in estimate.per_slice_centers[i]],
            "fitted": [float(v) for v in estimate.fitted_centers[i]],
            "fit": fit,
        }
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def _cmd_pith(args) -> int:
    try:
        _require_file(args.input, "input")
    except FileNotFoundError as exc:
        return _usage_error(str(exc))
    try:
        stack = image.load_stack(args.input)
        estimate = _estimate_pith(stack, args)
    except TreeRingError as exc:
        return _stage_error("pith", exc)
    _emit(_pith_records(estimate), args.out)
    return 0


# ---------------------------------------------------------------- polar


def _sidecar_path(png_path) -> Path:
    return Path(png_path).with_suffix(".json")


def _load_pith_center(path, z: int):
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec["z"] == z:
            return tuple(rec["fitted"])
    raise ValueError(f"no slice z={z} in pith file {path}")


def _cmd_polar(args) -> int:
    try:
        _require_file(args.input, "input")
        if args.center is None and args.pith is None:
            return _usage_error("need --center X,Y or --pith FILE")
        if args.center is not None:
            center = _xy(args.center)
        else:
            _require_file(args.pith, "pith file")
            center = _load_pith_center(args.pith, args.slice)
    except FileNotFoundError as exc:
        return _usage_error(str(exc))
    except ValueError as exc:
        return _usage_error(str(exc))
    try:
        img = image.load_image(args.input)
        pol = polar.to_polar(img, center, args.angular_bins, args.pad_rows)
        image.save_image(args.out, pol.base, depth=16)
    except (TreeRingError, ValueError) as exc:
        return _stage_error("polar", exc)
    sidecar = {
        "angular_bins": pol.angular_bins,
        "center": list(pol.center),
        "max_radius": pol.max_radius,
        "pad_rows": pol.pad_rows,
        "width": pol.width,
    }
    _write_text(_sidecar_path(args.out), json.dumps(sidecar, sort_keys=True) + "\n")
    return 0


def _load_polar(png_path) -> polar.PolarImage:
    base = image.load_image(png_path)
    meta = json.loads(_sidecar_path(png_path).read_text())
    return polar.PolarImage(
        base=base,
        pad_rows=int(meta["pad_rows"]),
        center=tuple(meta["center"]),
        angular_bins=int(meta["angular_bins"]),
        max_radius=float(meta["max_radius"]),
    )


# ---------------------------------------------------------------- rings


def _detection_params(args) -> rings.DetectionParams:
    if args.mode is None:
        raise ValueError("--mode ridges|valleys is required (species-dependent)")
    return rings.DetectionParams(
        sigma=args.blur,
        pre_threshold=args.pre_threshold,
        post_threshold=args.post_threshold,
        mode=args.mode,
    )


def _cmd_rings(args) -> int:
    try:
        _require_file(args.polar, "polar image")
        _require_file(_sidecar_path(args.polar), "polar sidecar")
        params = _detection_params(args)
        if args.row is not None and not 0 <= args.row:
            return _usage_error(f"--row must be >= 0, got {args.row}")
    except (FileNotFoundError, ValueError) as exc:
        return _usage_error(str(exc))
    try:
        pol = _load_polar(args.polar)
        if args.row is not None and args.row >= pol.angular_bins:
            return _usage_error(f"--row {args.row} outside 0..{pol.angular_bins - 1}")
        marks = rings.detect_rings(pol, params)
        if args.row is not None:
            marks = [m for m in marks if m.row == args.row]
    except TreeRingError as exc:
        return _stage_error("rings", exc)
    _emit(rings.format_ring_file(marks), args.out)
    return 0


# ---------------------------------------------------------------- score


def _load_positions(path, row):
    """Read a position list: 1-column text or tab-separated ring file."""
    text = Path(path).read_text()
    if "\t" in text:
        parsed = rings.parse_ring_file(text)
        rows = {m.row for m in parsed}
        if row is None:
            if len(rows) != 1:
                raise ValueError(f"{path} has rows {sorted(rows)}; pick one with --row")
            row = rows.pop()
        for m in parsed:
            if m.row == row:
                return [float(p) for p in m.positions]
        raise ValueError(f"{path} has no row {row}")
    vals = [float(line) for line in text.split() if line.strip()]
    return vals


def _cmd_score(args) -> int:
    try:
        _require_file(args.truth, "truth file")
        _require_file(args.detected, "detected file")
        truth = _load_positions(args.truth, args.row)
        detected = _load_positions(args.detected, args.row)
    except FileNotFoundError as exc:
        return _usage_error(str(exc))
    except ValueError as exc:
        return _usage_error(str(exc))
    try:
        result = evaluate.edit_distance(
            truth, detected, evaluate.EditCosts(args.add_cost, args.remove_cost)
        )
    except TreeRingError as exc:
        return _stage_error("score", exc)
    payload = {
        "cost": result.total_cost,
        "n_truth": len(truth),
        "n_detected": len(detected),
        "pairs": [list(p) for p in result.pairs],
        "unmatched_truth": list(result.unmatched_truth),
        "unmatched_detected": list(result.unmatched_detected),
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- sweep


def _cmd_sweep(args) -> int:
    try:
        _require_file(args.polar, "polar image")
        _require_file(_sidecar_path(args.polar), "polar sidecar")
        _require_file(args.truth, "truth file")
        if args.mode is None:
            return _usage_error("--mode ridges|valleys is required (species-dependent)")
    except FileNotFoundError as exc:
        return _usage_error(str(exc))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        pol = _load_polar(args.polar)
        if not 0 <= args.row < pol.angular_bins:
            return _usage_error(f"--row {args.row} outside 0..{pol.angular_bins - 1}")
        truth = _load_positions(args.truth, None)
        grid = evaluate.run_sweep(
            pol,
            truth,
            args.row,
            blur_values=_float_list(args.blurs),
            pre_values=_float_list(args.pre_thresholds),
            post_values=_float_list(args.post_thresholds),
            mode=args.mode,
            costs=evaluate.EditCosts(args.add_cost, args.remove_cost),
        )
    except (TreeRingError, ValueError) as exc:
        return _stage_error("sweep", exc)
    for blur in grid.blur_values:
        _write_text(out_dir / f"heatmap_blur_{blur:g}.csv", evaluate.write_heatmap(grid, blur))
    blur, pre, post, cost = grid.best
    best = {"blur": blur, "pre_threshold": pre, "post_threshold": post, "cost": cost}
    _write_text(out_dir / "best.json", json.dumps(best, sort_keys=True) + "\n")
    return 0


# ---------------------------------------------------------------- pipeline


def _cmd_pipeline(args) -> int:
    try:
        _require_file(args.input, "input")
        params = _detection_params(args)
    except (FileNotFoundError, ValueError) as exc:
        return _usage_error(str(exc))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pad_rows = args.pad_rows
    if pad_rows is None:
        pad_rows = max(16, math.ceil(3 * args.blur))
    try:
        stack = image.load_stack(args.input)
    except TreeRingError as exc:
        return _stage_error("load", exc)
    try:
        estimate = _estimate_pith(stack, args)
    except TreeRingError as exc:
        return _stage_error("pith", exc)
    _write_text(out_dir / "pith.jsonl", _pith_records(estimate))
    for z, sl in enumerate(stack):
        center = tuple(estimate.fitted_centers[z])
        try:
            pol = polar.to_polar(sl, center, args.angular_bins, pad_rows)
        except TreeRingError as exc:
            return _stage_error(f"polar (slice {z})", exc)
        if args.save_polar:
            png = out_dir / f"polar_{z:04d}.png"
            image.save_image(png, pol.base, depth=16)
            sidecar = {
                "angular_bins": pol.angular_bins,
                "center": list(pol.center),
                "max_radius": pol.max_radius,
                "pad_rows": pol.pad_rows,
                "width": pol.width,
            }
            _write_text(_sidecar_path(png), json.dumps(sidecar, sort_keys=True) + "\n")
        try:
            marks = rings.detect_rings(pol, params, z=z)
        except TreeRingError as exc:
            return _stage_error(f"rings (slice {z})", exc)
        _write_text(out_dir / f"rings_{z:04d}.txt", rings.format_ring_file(marks))
    return 0


# ---------------------------------------------------------------- parser


def _add_pith_flags(p):
    p.add_argument("--sigma", type=float, default=2.0, help="blur of the Sobel responses")
    p.add_argument("--min-count", type=int, default=100, help="profile fallback pixel count")
    p.add_argument("--mask-frac", type=float, default=0.1, help="foreground threshold fraction")


def _add_polar_flags(p, pad_default=16):
    p.add_argument("--angular-bins", type=int, default=720)
    p.add_argument(
        "--pad-rows",
        type=int,
        default=pad_default,
        help="wrapped rows prepended at the top" + ("" if pad_default else " (default: max(16, 3*blur))"),
    )


def _add_detection_flags(p):
    p.add_argument("--mode", choices=rings.MODES, default=None, help="ring species (required)")
    p.add_argument("--blur", type=float, default=0.0)
    p.add_argument("--pre-threshold", type=float, default=0.0)
    p.add_argument("--post-threshold", type=float, default=0.0)


def _add_cost_flags(p):
    p.add_argument("--add-cost", type=float, default=200.0)
    p.add_argument("--remove-cost", type=float, default=200.0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="treerings",
        description="Tree-disk pith location and ring detection on CT slices",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params-json", default=None, help="JSON file of parameter defaults")

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic disk stack")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--width", type=int, default=400)
    p.add_argument("--height", type=int, default=400)
    p.add_argument("--center", default="200,200")
    p.add_argument("--radii", default="20,40,60")
    p.add_argument("--ring-width", type=float, default=2.0)
    p.add_argument("--ring-amplitude", type=float, default=0.5)
    p.add_argument("--base-intensity", type=float, default=100.0)
    p.add_argument("--background-intensity", type=float, default=0.0)
    p.add_argument("--crack-angle", type=float, default=None, help="crack direction in degrees")
    p.add_argument("--crack-width", type=float, default=4.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slices", type=int, default=1)
    p.add_argument("--drift", default="0,0", help="center drift per slice, 'dx,dy'")
    p.add_argument("--depth", type=int, choices=(8, 16), default=8)
    p.add_argument("--valleys", action="store_true", help="rings as intensity valleys")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("pith", parents=[common], help="locate per-slice centers")
    p.add_argument("--input", required=True)
    _add_pith_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pith)

    p = sub.add_parser("polar", parents=[common], help="resample one slice to polar")
    p.add_argument("--input", required=True)
    p.add_argument("--center", default=None, help="center as 'X,Y'")
    p.add_argument("--pith", default=None, help="pith JSONL from the pith stage")
    p.add_argument("--slice", type=int, default=0, help="slice z for --pith lookup")
    _add_polar_flags(p)
    p.add_argument("--out", required=True, help="output 16-bit PNG (sidecar JSON alongside)")
    p.set_defaults(func=_cmd_polar)

    p = sub.add_parser("rings", parents=[common], help="detect ring boundaries")
    p.add_argument("--polar", required=True, help="polar PNG from the polar stage")
    _add_detection_flags(p)
    p.add_argument("--row", type=int, default=None, help="restrict output to one ray")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_rings)

    p = sub.add_parser("score", parents=[common], help="edit-distance score of two ring lists")
    p.add_argument("--truth", required=True)
    p.add_argument("--detected", required=True)
    p.add_argument("--row", type=int, default=None, help="row to pick from ring files")
    _add_cost_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("sweep", parents=[common], help="parameter grid sweep on one ray")
    p.add_argument("--polar", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--mode", choices=rings.MODES, default=None)
    p.add_argument("--blurs", default="0,1,2,3")
    p.add_argument("--pre-thresholds", default=",".join(str(v) for v in evaluate.DEFAULT_THRESHOLD_VALUES))
    p.add_argument("--post-thresholds", default=",".join(str(v) for v in evaluate.DEFAULT_THRESHOLD_VALUES))
    _add_cost_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("pipeline", parents=[common], help="pith -> polar -> rings per slice")
    p.add_argument("--input", required=True)
    _add_pith_flags(p)
    _add_polar_flags(p, pad_default=None)
    _add_detection_flags(p)
    p.add_argument("--save-polar", action="store_true")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_pipeline)

    return parser, sub


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, sub = build_parser()
    if "--params-json" in argv:
        idx = argv.index("--params-json")
        if idx + 1 >= len(argv):
            return _usage_error("--params-json needs a file path")
        path = Path(argv[idx + 1])
        if not path.exists():
            return _usage_error(f"params file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            return _usage_error(f"bad JSON in {path}: {exc}")
        if not argv or argv[0] not in sub.choices:
            return _usage_error("--params-json requires a subcommand")
        chosen = sub.choices[argv[0]]
        dests = {a.dest for a in chosen._actions}
        unknown = sorted(set(data) - dests)
        if unknown:
            return _usage_error(f"unknown parameter(s) in {path}: {', '.join(unknown)}")
        chosen.set_defaults(**data)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

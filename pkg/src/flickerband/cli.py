"""Command-line entry points.

Subcommands: synth, gallery, famse, check-zeroinit, align, field.
Exit codes: 0 success, 2 configuration error, 3 I/O or unusable input data,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import shutil
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .align import align_sequences
from .compositor import (ClipRenderer, DegradationSpec, SamplerRanges, StripeLayerSpec,
                         sample_spec)
from .config import PipelineConfig, load_config
from .errors import (AlignmentError, ConfigError, FlickerbandError, FrameIOError,
                     InvariantViolation)
from .frames_io import (dequantize_unit, frame_name, hash_frames, list_frames,
                        load_gray, load_rgb, quantize_unit, save_png)
from .geometry import LayerKinematics, StripeBand
from .manifest import (clip_manifest, dump_kv, dump_manifest, parse_manifest,
                       spec_from_manifest)
from .metrics import clamp_confidence, fa_mse, verify_injection_identity, zero_init_augment
from .rng import derive_rng
from .stripes import (STRIPE_KINDS, ComplexParams, CrackedParams, CurveParams,
                      DiamondParams)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# synth


def _partition_clips(paths: list[Path], clip_length: int) -> list[list[Path]]:
    clips = [paths[i:i + clip_length] for i in range(0, len(paths), clip_length)]
    if clips and len(clips[-1]) < clip_length:
        clips.pop()  # drop the trailing remainder
    if not clips:
        raise ConfigError(f"input has {len(paths)} frames; need at least one "
                          f"full clip of {clip_length}")
    return clips


def _load_clip_frames(paths: list[Path]) -> tuple[list[np.ndarray], int, int]:
    frames = [load_rgb(path) for path in paths]
    height, width = frames[0].shape[:2]
    for path, frame in zip(paths, frames):
        if frame.shape[:2] != (height, width):
            raise FrameIOError(f"frame {path} is {frame.shape[1]}x{frame.shape[0]}, "
                               f"expected {width}x{height}")
    return frames, width, height


def _write_preview(path: Path, degraded: np.ndarray, amplitude: np.ndarray) -> None:
    amp_rgb = np.repeat(quantize_unit(amplitude)[..., None], 3, axis=2)
    save_png(path, np.concatenate([degraded, amp_rgb], axis=1))


def _synth_clip(config: PipelineConfig, clip_index: int, paths: list[Path]) -> str:
    frames, width, height = _load_clip_frames(paths)
    spec_rng = derive_rng(config.seed, "clip", clip_index, "spec")
    spec = sample_spec(config.sampler_ranges(), spec_rng, width, height)
    renderer = ClipRenderer(spec, width, height)

    final_dir = config.output_dir / f"clip_{clip_index:04d}"
    if final_dir.exists():
        raise FrameIOError(f"output already exists: {final_dir}")
    staging = config.output_dir / f".staging-clip_{clip_index:04d}"
    if staging.exists():
        shutil.rmtree(staging)
    try:
        (staging / "frames").mkdir(parents=True)
        (staging / "amplitude").mkdir()
        if config.emit_fields:
            (staging / "fields").mkdir()
        for t, frame in enumerate(frames):
            degraded, amplitude = renderer.render_frame(frame, t)
            save_png(staging / "frames" / frame_name(t), degraded)
            save_png(staging / "amplitude" / frame_name(t), quantize_unit(amplitude.values))
            if config.emit_fields:
                field, _ = renderer.render_field(t)
                np.save(staging / "fields" / f"{t:06d}.npy", field.values)
            if config.emit_preview and t == 0:
                _write_preview(staging / "preview.png", degraded, amplitude.values)
        record = clip_manifest(spec, width, height, __version__, hash_frames(paths))
        (staging / "manifest.txt").write_text(dump_manifest(record), encoding="utf-8")
        staging.replace(final_dir)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    thick_kind = spec.thick.kind if spec.thick else "-"
    return (f"clip_{clip_index:04d}: {spec.base.kind}+{thick_kind} "
            f"seed={spec.seed} frames={spec.frame_count} -> {final_dir}")


def cmd_synth(args) -> int:
    config = _synth_config(args)
    config.validate()
    clip_paths = _partition_clips(list_frames(config.input_dir), config.clip_length)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    if config.workers == 1:
        lines = [_synth_clip(config, i, paths) for i, paths in enumerate(clip_paths)]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_synth_clip, config, i, paths)
                       for i, paths in enumerate(clip_paths)]
            lines = [f.result() for f in futures]  # ordered join
    for line in lines:
        print(line)
    print(f"{len(lines)} clip(s) -> {config.output_dir}")
    return EXIT_OK


def _synth_config(args) -> PipelineConfig:
    if args.config is not None:
        config = load_config(args.config)
    else:
        if args.input is None or args.output is None:
            raise ConfigError("synth needs --config or both --input and --output")
        config = PipelineConfig(input_dir=Path(args.input), output_dir=Path(args.output))
    if args.input is not None:
        config.input_dir = Path(args.input)
    if args.output is not None:
        config.output_dir = Path(args.output)
    if args.seed is not None:
        config.seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    if args.clip_length is not None:
        config.clip_length = args.clip_length
    if args.emit_fields:
        config.emit_fields = True
    if args.emit_preview:
        config.emit_preview = True
    return config


# ---------------------------------------------------------------------------
# gallery


GALLERY_CELL = (160, 120)
_GALLERY_BASE_BAND = StripeBand(width=6.0, gap=10.0, feather=1.0)
_GALLERY_THICK_BAND = StripeBand(width=38.0, gap=42.0, feather=1.0)


def _gallery_params(kind: str, band: StripeBand, cell_w: int):
    if kind == "uniform":
        return None
    if kind == "curve":
        return CurveParams(amplitude=10.0, sign=1, offset=5.0,
                           u_mid=(cell_w - 1) / 2.0, u_span=cell_w / 2.0)
    if kind == "cracked":
        return CrackedParams(keep_ratio=0.5, crack_count=2, crack_width=2.5,
                             jitter_ratio=0.5, smoothing=8.0)
    if kind == "diamond":
        return DiamondParams(length=24.0, size_ratio=0.6)
    if kind == "complex":
        return ComplexParams(width_jitter=3.0, spacing_jitter=2.0, edge_amplitude=1.5,
                             wiggle_amplitude=2.0, wiggle_smoothing=40.0,
                             edge_smoothing=3.0, blur_weight=1.0, blur_smoothing=3.0)
    raise ConfigError(f"unknown stripe kind {kind!r}")


def gallery_cell_spec(base_kind: str, thick_kind: str, seed: int,
                      cell: tuple[int, int] = GALLERY_CELL) -> DegradationSpec:
    """Static, axis-aligned spec for one gallery cell.

    Centers sit on half-pixel offsets so hard stripe edges fall between
    pixel rows and painted widths come out exact.
    """
    cell_w, cell_h = cell
    kin = LayerKinematics(center_x=cell_w / 2.0 + 0.5, center_y=cell_h / 2.0 + 0.5)
    base = StripeLayerSpec(kind=base_kind, band=_GALLERY_BASE_BAND, kinematics=kin,
                           role="base", params=_gallery_params(base_kind,
                                                               _GALLERY_BASE_BAND, cell_w))
    thick = StripeLayerSpec(kind=thick_kind, band=_GALLERY_THICK_BAND, kinematics=kin,
                            role="thick", params=_gallery_params(thick_kind,
                                                                 _GALLERY_THICK_BAND, cell_w))
    return DegradationSpec(base=base, thick=thick, intensity=0.8, seed=seed,
                           frame_count=1)


def render_gallery(seed: int, cell: tuple[int, int] = GALLERY_CELL,
                   frame: np.ndarray | None = None
                   ) -> tuple[np.ndarray, dict]:
    """5x5 grid image (rows: base kind, columns: thick kind) plus its manifest."""
    cell_w, cell_h = cell
    if frame is None:
        frame = np.full((cell_h, cell_w, 3), 217, dtype=np.uint8)
    if frame.shape[:2] != (cell_h, cell_w):
        raise ConfigError(f"gallery frame must be {cell_w}x{cell_h}, "
                          f"got {frame.shape[1]}x{frame.shape[0]}")
    grid = np.empty((5 * cell_h, 5 * cell_w, 3), dtype=np.uint8)
    cells = []
    for row, base_kind in enumerate(STRIPE_KINDS):
        for col, thick_kind in enumerate(STRIPE_KINDS):
            cell_seed = seed * 25 + row * 5 + col
            spec = gallery_cell_spec(base_kind, thick_kind, cell_seed, cell)
            renderer = ClipRenderer(spec, cell_w, cell_h)
            degraded, _ = renderer.render_frame(frame, 0)
            grid[row * cell_h:(row + 1) * cell_h,
                 col * cell_w:(col + 1) * cell_w] = degraded
            cells.append({"base": base_kind, "thick": thick_kind, "seed": cell_seed,
                          "row": row, "col": col})
    manifest = {"format": "flickerband-gallery", "version": 1,
                "cell_width": cell_w, "cell_height": cell_h}
    for i, cell_record in enumerate(cells):
        manifest[f"cell_{i:02d}"] = cell_record
    return grid, manifest


def cmd_gallery(args) -> int:
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = load_rgb(Path(args.frame)) if args.frame else None
    grid, manifest = render_gallery(args.seed if args.seed is not None else 0,
                                    frame=frame)
    save_png(out_dir / "gallery.png", grid)
    (out_dir / "gallery.txt").write_text(dump_kv(manifest) + "\n", encoding="utf-8")
    print(f"gallery ({grid.shape[1]}x{grid.shape[0]}) -> {out_dir / 'gallery.png'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# famse


def _load_map_stack(directory: Path) -> np.ndarray:
    paths = list_frames(directory)
    maps = [dequantize_unit(load_gray(path)) for path in paths]
    shapes = {m.shape for m in maps}
    if len(shapes) > 1:
        raise ConfigError(f"maps in {directory} have mixed shapes: {sorted(shapes)}")
    return np.stack(maps)


def cmd_famse(args) -> int:
    pred = clamp_confidence(_load_map_stack(Path(args.pred_dir)))
    truth = _load_map_stack(Path(args.gt_dir))
    if pred.shape != truth.shape:
        raise ConfigError(f"prediction stack {pred.shape} does not match "
                          f"ground truth {truth.shape}")
    print(f"{fa_mse(pred, truth):.6f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# check-zeroinit


def cmd_check_zeroinit(args) -> int:
    if args.dims < 1:
        raise ConfigError(f"--dims must be >= 1, got {args.dims}")
    if args.trials < 1:
        raise ConfigError(f"--trials must be >= 1, got {args.trials}")
    if args.perturb < 0:
        raise ConfigError(f"--perturb must be >= 0, got {args.perturb}")
    rng = derive_rng(args.seed if args.seed is not None else 0, "zeroinit")
    d = args.dims
    worst = 0.0
    for _ in range(args.trials):
        weights = zero_init_augment(rng.standard_normal((d, 4 * d)), extra_dim=d)
        if args.perturb:
            appended = weights.appended.copy()
            appended[0, 0] = args.perturb
            weights = replace(weights, appended=appended)
        activations = rng.standard_normal((4 * d, d))
        prior = rng.standard_normal((d, d))
        if args.perturb:
            prior[0, :] = 1.0
        worst = max(worst, verify_injection_identity(weights, activations, prior))
    print(f"max deviation: {worst:g}")
    if args.perturb == 0 and worst != 0.0:
        raise InvariantViolation(f"zero-init identity violated: deviation {worst!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# align


def cmd_align(args) -> int:
    captured = [load_rgb(p) for p in list_frames(Path(args.captured_dir))]
    reference = [load_rgb(p) for p in list_frames(Path(args.reference_dir))]
    report, aligned = align_sequences(captured, reference, window=args.window,
                                      border_threshold=args.border_threshold,
                                      per_frame_color=args.per_frame_color)
    out_dir = Path(args.output)
    (out_dir / "aligned").mkdir(parents=True, exist_ok=True)
    for t, frame in enumerate(aligned):
        save_png(out_dir / "aligned" / frame_name(t), frame)
    record = {
        "format": "flickerband-alignment",
        "version": 1,
        "crop": {"left": report.crop.left, "top": report.crop.top,
                 "width": report.crop.width, "height": report.crop.height},
        "temporal_offset": report.temporal_offset,
        "residual": report.residual,
        "source_lab": {"mean": list(report.source_stats.mean),
                       "std": list(report.source_stats.std)},
        "reference_lab": {"mean": list(report.reference_stats.mean),
                          "std": list(report.reference_stats.std)},
    }
    (out_dir / "report.txt").write_text(dump_kv(record) + "\n", encoding="utf-8")
    print(f"crop=({report.crop.left},{report.crop.top},{report.crop.width},"
          f"{report.crop.height}) offset={report.temporal_offset} "
          f"residual={report.residual:.6f}")
    if report.residual > 0.5:
        print("warning: high alignment residual; offset may lie outside the window",
              file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# field


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise ConfigError(f"--size must look like 1280x720, got {text!r}") from exc


def cmd_field(args) -> int:
    if args.manifest:
        record = parse_manifest(Path(args.manifest).read_text(encoding="utf-8"))
        spec, width, height = spec_from_manifest(record)
    else:
        width, height = _parse_size(args.size)
        rng = derive_rng(args.seed if args.seed is not None else 0, "field", "spec")
        ranges = replace(SamplerRanges(), frame_count=args.frames)
        spec = sample_spec(ranges, rng, width, height)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    renderer = ClipRenderer(spec, width, height)
    for t in range(spec.frame_count):
        field, _ = renderer.render_field(t)
        np.save(out_dir / f"{t:06d}.npy", field.values)
    record = clip_manifest(spec, width, height, __version__, [])
    (out_dir / "manifest.txt").write_text(dump_manifest(record), encoding="utf-8")
    print(f"{spec.frame_count} field(s) ({width}x{height}) -> {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flickerband",
        description="Synthesize flicker-banding degradation on frame sequences, "
                    "emit ground-truth amplitude maps, and align captured clips.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="degrade clips from an input frame directory")
    p.add_argument("--config", type=Path, help="pipeline config file")
    p.add_argument("--input", help="input frame directory (overrides config)")
    p.add_argument("--output", help="output directory (overrides config)")
    p.add_argument("--seed", type=int, help="global seed")
    p.add_argument("--workers", type=int, help="concurrent clip workers")
    p.add_argument("--clip-length", type=int, help="frames per clip")
    p.add_argument("--emit-fields", action="store_true",
                   help="also dump raw occupancy fields (.npy)")
    p.add_argument("--emit-preview", action="store_true",
                   help="write a preview montage per clip")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gallery", help="render the 5x5 base/thick kind grid")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="gallery seed")
    p.add_argument("--frame", help="optional test frame (PNG) sized to one cell")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("famse", help="mean squared error between two map directories")
    p.add_argument("pred_dir", help="predicted confidence maps")
    p.add_argument("gt_dir", help="ground-truth amplitude maps")
    p.set_defaults(func=cmd_famse)

    p = sub.add_parser("check-zeroinit", help="verify the zero-init injection identity")
    p.add_argument("--dims", type=int, default=8, help="prior channel dimension")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--perturb", type=float, default=0.0,
                   help="inject this value into one appended weight")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_check_zeroinit)

    p = sub.add_parser("align", help="register a captured clip against its reference")
    p.add_argument("captured_dir")
    p.add_argument("reference_dir")
    p.add_argument("--output", required=True)
    p.add_argument("--window", type=int, default=15, help="temporal search window")
    p.add_argument("--border-threshold", type=float, default=0.06)
    p.add_argument("--per-frame-color", action="store_true",
                   help="match color statistics per frame instead of per clip")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("field", help="dump raw occupancy fields")
    p.add_argument("--output", required=True)
    p.add_argument("--manifest", help="re-render the spec from a manifest")
    p.add_argument("--size", default="1280x720", help="frame size WxH")
    p.add_argument("--frames", type=int, default=16)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_field)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FrameIOError, AlignmentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FlickerbandError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

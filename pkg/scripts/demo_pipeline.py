#!/usr/bin/env python3
"""End-to-end demo on synthetic input: generate clean frames, degrade them,
render the kind gallery, and score the stored amplitude maps with the
mean-squared-error tool.

Writes everything under --workdir (default ./demo_out) and prints the CLI
invocations as it goes.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from flickerband.cli import main as flickerband_main
from flickerband.frames_io import save_png
from flickerband.rng import derive_rng


def make_clean_frames(directory: Path, count: int, width: int, height: int) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    rng = derive_rng(2024, "demo-frames")
    ramp_x = np.linspace(0.15, 0.95, width)
    ramp_y = np.linspace(0.3, 1.0, height)
    base = np.outer(ramp_y, ramp_x)
    for t in range(count):
        drift = 0.05 * np.sin(2 * np.pi * t / count)
        rgb = np.stack([base + drift,
                        base * 0.9,
                        np.clip(base - drift, 0, 1)], axis=-1)
        noise = rng.normal(0.0, 0.01, rgb.shape)
        frame = np.clip((rgb + noise) * 255.0, 0, 255).astype(np.uint8)
        save_png(directory / f"{t:06d}.png", frame)


def run(argv: list[str]) -> None:
    print("$ flickerband " + " ".join(argv))
    code = flickerband_main(argv)
    if code != 0:
        raise SystemExit(f"command failed with exit code {code}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", type=Path, default=Path("demo_out"))
    parser.add_argument("--clips", type=int, default=2)
    parser.add_argument("--clip-length", type=int, default=8)
    parser.add_argument("--size", default="320x180")
    args = parser.parse_args()
    width, height = (int(v) for v in args.size.split("x"))

    clean = args.workdir / "clean"
    degraded = args.workdir / "degraded"
    make_clean_frames(clean, args.clips * args.clip_length, width, height)
    run(["synth", "--input", str(clean), "--output", str(degraded),
         "--seed", "2024", "--clip-length", str(args.clip_length),
         "--emit-preview"])
    run(["gallery", "--output", str(args.workdir / "gallery"), "--seed", "1"])
    amp = degraded / "clip_0000" / "amplitude"
    print("amplitude maps scored against themselves (must print 0.000000):")
    run(["famse", str(amp), str(amp)])
    run(["check-zeroinit", "--dims", "8", "--trials", "50"])
    print(f"done; inspect {args.workdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

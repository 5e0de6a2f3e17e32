#!/usr/bin/env python3
"""Benchmark field rendering across stripe kinds and resolutions.

Reports steady-state per-frame render time (construction and the first
frame's grid bake excluded), which is the number that governs dataset
synthesis throughput.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from flickerband.compositor import ClipRenderer, DegradationSpec, StripeLayerSpec
from flickerband.geometry import LayerKinematics, StripeBand
from flickerband.stripes import (ComplexParams, CrackedParams, CurveParams,
                                 DiamondParams)

PARAMS = {
    "uniform": None,
    "curve": CurveParams(amplitude=12.0, sign=1, offset=6.0, u_mid=640.0, u_span=640.0),
    "cracked": CrackedParams(keep_ratio=0.5, crack_count=3, crack_width=2.5,
                             jitter_ratio=0.5, smoothing=8.0),
    "diamond": DiamondParams(length=30.0, size_ratio=0.6),
    "complex": ComplexParams(width_jitter=3.0, spacing_jitter=2.0, edge_amplitude=1.5,
                             wiggle_amplitude=2.0, wiggle_smoothing=40.0,
                             edge_smoothing=3.0, blur_weight=1.0, blur_smoothing=3.0),
}


def build_spec(kind: str) -> DegradationSpec:
    base = StripeLayerSpec(kind, StripeBand(8.0, 12.0, 1.5),
                           LayerKinematics(640, 360, 0.2, 1.5, -2.0), "base",
                           PARAMS[kind])
    thick = StripeLayerSpec(kind, StripeBand(42.0, 70.0, 4.0),
                            LayerKinematics(640, 360, -0.12, -1.0, 2.5), "thick",
                            PARAMS[kind])
    return DegradationSpec(base=base, thick=thick, intensity=0.7, seed=7,
                           frame_count=16)


def bench(kind: str, width: int, height: int, frames: int) -> float:
    renderer = ClipRenderer(build_spec(kind), width, height)
    renderer.render_field(0)  # warmup
    best = float("inf")
    for t in range(1, min(frames, 15) + 1):
        start = time.perf_counter()
        renderer.render_field(t)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", nargs="*", default=["640x360", "1280x720"])
    parser.add_argument("--frames", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kind':10s} " + " ".join(f"{s:>12s}" for s in args.sizes))
    for kind in PARAMS:
        row = [f"{kind:10s}"]
        for size in args.sizes:
            w, h = (int(v) for v in size.split("x"))
            row.append(f"{bench(kind, w, h, args.frames) * 1e3:10.1f}ms")
        print(" ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())

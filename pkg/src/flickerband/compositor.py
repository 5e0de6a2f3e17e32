"""Dual-layer field composition and clip rendering.

A clip is described by a DegradationSpec: a dense base stripe layer, an
optional wide thick layer, an intensity knob, and a seed that pins every
stochastic draw.  Per frame the two layers are evaluated, fused by pointwise
max, scaled into a ground-truth amplitude map, and multiplied into the clean
frame as luminance attenuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError
from .geometry import FrameContext, LayerKinematics, StripeBand, parallel_coord
from .rng import KeyPath
from .stripes import (STRIPE_KINDS, ComplexParams, CrackedParams, CurveParams,
                      DiamondParams, StripeGenerator, make_generator)

_PARAM_TYPES = {
    "uniform": type(None),
    "curve": CurveParams,
    "cracked": CrackedParams,
    "diamond": DiamondParams,
    "complex": ComplexParams,
}


@dataclass(frozen=True)
class StripeLayerSpec:
    """Everything needed to evaluate one banding layer."""

    kind: str
    band: StripeBand
    kinematics: LayerKinematics
    role: str = "base"
    params: object = None

    def __post_init__(self):
        if self.kind not in STRIPE_KINDS:
            raise ConfigError(f"unknown stripe kind {self.kind!r}")
        if self.role not in ("base", "thick"):
            raise ConfigError(f"layer role must be 'base' or 'thick', got {self.role!r}")
        expected = _PARAM_TYPES[self.kind]
        if not isinstance(self.params, expected):
            raise ConfigError(
                f"{self.kind} layer expects params of type {expected.__name__}, "
                f"got {type(self.params).__name__}")


@dataclass(frozen=True)
class DegradationSpec:
    """Reproducible description of one degraded clip."""

    base: StripeLayerSpec
    thick: Optional[StripeLayerSpec]
    intensity: float
    seed: int
    frame_count: int

    def __post_init__(self):
        if not 0.0 < self.intensity <= 1.0:
            raise ConfigError(f"intensity must be in (0, 1], got {self.intensity}")
        if self.frame_count < 1:
            raise ConfigError(f"frame_count must be >= 1, got {self.frame_count}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.base.role != "base":
            raise ConfigError("base layer must have role 'base'")
        if self.thick is not None:
            if self.thick.role != "thick":
                raise ConfigError("thick layer must have role 'thick'")
            if not self.thick.band.width > self.base.band.width:
                raise ConfigError(
                    f"thick stripe width ({self.thick.band.width}) must exceed "
                    f"base stripe width ({self.base.band.width})")


@dataclass(frozen=True)
class OccupancyField:
    """Per-pixel banding strength for one frame, values in [0, 1]."""

    values: np.ndarray
    frame_index: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class AmplitudeMap:
    """Ground-truth luminance-fluctuation amplitude per pixel, in [0, 1]."""

    values: np.ndarray


def fuse(base: OccupancyField, thick: OccupancyField) -> OccupancyField:
    """Pointwise maximum of two occupancy fields of identical geometry."""
    if base.values.shape != thick.values.shape:
        raise ValueError(f"cannot fuse fields of shapes {base.values.shape} "
                         f"and {thick.values.shape}")
    if base.frame_index != thick.frame_index:
        raise ValueError(f"cannot fuse fields of different frames "
                         f"({base.frame_index} vs {thick.frame_index})")
    return OccupancyField(np.maximum(base.values, thick.values), base.frame_index)


def apply_degradation(clean_frame: np.ndarray, occupancy: OccupancyField,
                      intensity: float) -> np.ndarray:
    """Darken a uint8 frame by the banding field: c' = c * (1 - a * O)."""
    frame = np.asarray(clean_frame)
    if frame.shape[:2] != occupancy.values.shape:
        raise ValueError(f"frame {frame.shape[:2]} does not match "
                         f"field {occupancy.values.shape}")
    attenuation = 1.0 - intensity * occupancy.values
    if frame.ndim == 3:
        attenuation = attenuation[..., None]
    out = frame.astype(np.float64) * attenuation
    return np.rint(out).astype(np.uint8)


class ClipRenderer:
    """Evaluates one DegradationSpec on a fixed frame geometry.

    Construction bakes layer noise for the clip; frames can then be rendered
    in any order with identical results.
    """

    def __init__(self, spec: DegradationSpec, width: int, height: int):
        self.spec = spec
        self.width = width
        self.height = height
        root = KeyPath(spec.seed)
        self.base_layer = self._build(spec.base, root)
        self.thick_layer = self._build(spec.thick, root) if spec.thick else None

    @staticmethod
    def _build(layer: StripeLayerSpec, root: KeyPath) -> StripeGenerator:
        return make_generator(layer.kind, layer.band, layer.kinematics,
                              layer.params, key=root.child("layer", layer.role))

    def _ctx(self, t: int) -> FrameContext:
        if not 0 <= t < self.spec.frame_count:
            raise ConfigError(f"frame index {t} outside clip of "
                              f"{self.spec.frame_count} frames")
        return FrameContext(self.width, self.height, t)

    def occupancy(self, t: int) -> OccupancyField:
        ctx = self._ctx(t)
        values = self.base_layer.occupancy_frame(ctx)
        if self.thick_layer is not None:
            np.maximum(values, self.thick_layer.occupancy_frame(ctx), out=values)
        return OccupancyField(values, t)

    def render_field(self, t: int) -> tuple[OccupancyField, AmplitudeMap]:
        field = self.occupancy(t)
        return field, AmplitudeMap(self.spec.intensity * field.values)

    def render_frame(self, clean_frame: np.ndarray, t: int
                     ) -> tuple[np.ndarray, AmplitudeMap]:
        field, amplitude = self.render_field(t)
        return apply_degradation(clean_frame, field, self.spec.intensity), amplitude

    def render_clip(self, clean_frames: Sequence[np.ndarray]
                    ) -> tuple[list[np.ndarray], list[AmplitudeMap]]:
        if len(clean_frames) != self.spec.frame_count:
            raise ConfigError(f"spec expects {self.spec.frame_count} frames, "
                              f"got {len(clean_frames)}")
        degraded = []
        amplitudes = []
        for t, frame in enumerate(clean_frames):
            out, amp = self.render_frame(frame, t)
            degraded.append(out)
            amplitudes.append(amp)
        return degraded, amplitudes


def render_field(spec: DegradationSpec, t: int, width: int, height: int
                 ) -> tuple[OccupancyField, AmplitudeMap]:
    """One-shot field render; build a ClipRenderer instead for whole clips."""
    return ClipRenderer(spec, width, height).render_field(t)


# ---------------------------------------------------------------------------
# spec sampling


@dataclass(frozen=True)
class BandRanges:
    """Uniform sampling ranges for one layer's lattice and motion."""

    width: tuple[float, float]
    gap: tuple[float, float]
    feather: tuple[float, float]
    tilt: tuple[float, float]
    velocity: tuple[float, float]
    center_frac: tuple[float, float] = (0.25, 0.75)


@dataclass(frozen=True)
class SamplerRanges:
    """Full sampling configuration for sample_spec.

    Scalar ranges are closed intervals; collapse one to a point to pin the
    value.  Kind-specific ranges apply to whichever layer draws that kind.
    """

    base: BandRanges = BandRanges(width=(4.0, 10.0), gap=(6.0, 18.0),
                                  feather=(1.0, 2.0), tilt=(-0.35, 0.35),
                                  velocity=(-4.0, 4.0))
    thick: BandRanges = BandRanges(width=(26.0, 64.0), gap=(40.0, 110.0),
                                   feather=(2.0, 6.0), tilt=(-0.35, 0.35),
                                   velocity=(-4.0, 4.0))
    base_kinds: tuple[str, ...] = STRIPE_KINDS
    thick_kinds: tuple[str, ...] = STRIPE_KINDS
    intensity: tuple[float, float] = (0.35, 0.9)
    frame_count: int = 16
    curve_amplitude: tuple[float, float] = (4.0, 40.0)
    cracked_keep_ratio: tuple[float, float] = (0.35, 0.8)
    cracked_count: tuple[int, int] = (1, 4)
    cracked_width: tuple[float, float] = (1.5, 6.0)
    cracked_jitter: tuple[float, float] = (0.2, 0.9)
    cracked_smoothing: tuple[float, float] = (6.0, 24.0)
    diamond_length: tuple[float, float] = (14.0, 60.0)
    diamond_ratio: tuple[float, float] = (0.35, 0.8)
    complex_width_jitter: tuple[float, float] = (1.0, 5.0)
    complex_spacing_jitter: tuple[float, float] = (0.5, 3.0)
    complex_edge_amplitude: tuple[float, float] = (0.5, 2.5)
    complex_wiggle_amplitude: tuple[float, float] = (0.5, 3.0)
    complex_wiggle_smoothing: tuple[float, float] = (30.0, 90.0)
    complex_edge_smoothing: tuple[float, float] = (2.0, 6.0)
    complex_blur_weight: tuple[float, float] = (0.3, 1.5)
    complex_blur_smoothing: tuple[float, float] = (2.0, 6.0)


def _check_range(name: str, rng_pair) -> None:
    lo, hi = rng_pair
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise ConfigError(f"range {name} is empty or inverted: ({lo}, {hi})")


def validate_ranges(ranges: SamplerRanges) -> None:
    for name in ("intensity", "curve_amplitude", "cracked_keep_ratio", "cracked_count",
                 "cracked_width", "cracked_jitter", "cracked_smoothing", "diamond_length",
                 "diamond_ratio", "complex_width_jitter", "complex_spacing_jitter",
                 "complex_edge_amplitude", "complex_wiggle_amplitude",
                 "complex_wiggle_smoothing", "complex_edge_smoothing",
                 "complex_blur_weight", "complex_blur_smoothing"):
        _check_range(name, getattr(ranges, name))
    for layer_name in ("base", "thick"):
        band = getattr(ranges, layer_name)
        for field_name in ("width", "gap", "feather", "tilt", "velocity", "center_frac"):
            _check_range(f"{layer_name}.{field_name}", getattr(band, field_name))
        if band.feather[0] > band.width[0] / 2.0:
            raise ConfigError(
                f"{layer_name}: feather range starts above width/2 for the "
                f"narrowest width ({band.feather[0]} > {band.width[0] / 2.0})")
    for name, kinds in (("base_kinds", ranges.base_kinds), ("thick_kinds", ranges.thick_kinds)):
        if not kinds:
            raise ConfigError(f"{name} must not be empty")
        for kind in kinds:
            if kind not in STRIPE_KINDS:
                raise ConfigError(f"{name} contains unknown kind {kind!r}")
    if ranges.thick.width[1] <= ranges.base.width[0]:
        raise ConfigError(
            "thick width range lies entirely at or below the base width range; "
            "no spec can satisfy thick > base")
    if ranges.frame_count < 1:
        raise ConfigError(f"frame_count must be >= 1, got {ranges.frame_count}")


def _uniform(rng: np.random.Generator, pair) -> float:
    lo, hi = pair
    return lo if lo == hi else float(rng.uniform(lo, hi))


def _frame_u_extent(width: int, height: int, kin: LayerKinematics) -> tuple[float, float]:
    """Midpoint and half-span of the stripe-axis coordinate over the frame."""
    corners = [parallel_coord(x, y, kin)
               for x in (0.0, width - 1.0) for y in (0.0, height - 1.0)]
    lo, hi = min(corners), max(corners)
    return (lo + hi) / 2.0, max((hi - lo) / 2.0, 1.0)


def _sample_kind_params(kind: str, rng: np.random.Generator, ranges: SamplerRanges,
                        width: int, height: int, kin: LayerKinematics):
    if kind == "uniform":
        return None
    if kind == "curve":
        amplitude = _uniform(rng, ranges.curve_amplitude)
        sign = int(rng.integers(0, 2)) * 2 - 1
        offset = float(rng.uniform(0.0, amplitude)) if amplitude > 0 else 0.0
        u_mid, u_span = _frame_u_extent(width, height, kin)
        return CurveParams(amplitude=amplitude, sign=sign, offset=offset,
                           u_mid=u_mid, u_span=u_span)
    if kind == "cracked":
        lo, hi = ranges.cracked_count
        return CrackedParams(
            keep_ratio=_uniform(rng, ranges.cracked_keep_ratio),
            crack_count=int(rng.integers(lo, hi + 1)),
            crack_width=_uniform(rng, ranges.cracked_width),
            jitter_ratio=_uniform(rng, ranges.cracked_jitter),
            smoothing=_uniform(rng, ranges.cracked_smoothing))
    if kind == "diamond":
        return DiamondParams(length=_uniform(rng, ranges.diamond_length),
                             size_ratio=_uniform(rng, ranges.diamond_ratio))
    if kind == "complex":
        return ComplexParams(
            width_jitter=_uniform(rng, ranges.complex_width_jitter),
            spacing_jitter=_uniform(rng, ranges.complex_spacing_jitter),
            edge_amplitude=_uniform(rng, ranges.complex_edge_amplitude),
            wiggle_amplitude=_uniform(rng, ranges.complex_wiggle_amplitude),
            wiggle_smoothing=_uniform(rng, ranges.complex_wiggle_smoothing),
            edge_smoothing=_uniform(rng, ranges.complex_edge_smoothing),
            blur_weight=_uniform(rng, ranges.complex_blur_weight),
            blur_smoothing=_uniform(rng, ranges.complex_blur_smoothing))
    raise ConfigError(f"unknown stripe kind {kind!r}")


def _sample_layer(role: str, kind: str, band_ranges: BandRanges, width_px: float,
                  rng: np.random.Generator, ranges: SamplerRanges,
                  width: int, height: int) -> StripeLayerSpec:
    gap = _uniform(rng, band_ranges.gap)
    feather_hi = min(band_ranges.feather[1], width_px / 2.0)
    if band_ranges.feather[0] > feather_hi:
        raise ConfigError(f"{role}: cannot fit feather below width/2 for width {width_px}")
    feather = _uniform(rng, (band_ranges.feather[0], feather_hi))
    kin = LayerKinematics(
        center_x=_uniform(rng, band_ranges.center_frac) * width,
        center_y=_uniform(rng, band_ranges.center_frac) * height,
        tilt=_uniform(rng, band_ranges.tilt),
        velocity_x=_uniform(rng, band_ranges.velocity),
        velocity_y=_uniform(rng, band_ranges.velocity))
    params = _sample_kind_params(kind, rng, ranges, width, height, kin)
    return StripeLayerSpec(kind=kind, band=StripeBand(width_px, gap, feather),
                           kinematics=kin, role=role, params=params)


_WIDTH_ATTEMPTS = 1000


def sample_spec(ranges: SamplerRanges, rng: np.random.Generator,
                width: int, height: int) -> DegradationSpec:
    """Draw a full DegradationSpec from the configured ranges.

    The thick layer's stripe width is rejection-sampled until it exceeds the
    base width; validate_ranges has already refused range pairs for which
    that can never happen.
    """
    validate_ranges(ranges)
    base_kind = str(rng.choice(list(ranges.base_kinds)))
    thick_kind = str(rng.choice(list(ranges.thick_kinds)))
    base_width = _uniform(rng, ranges.base.width)
    for _ in range(_WIDTH_ATTEMPTS):
        thick_width = _uniform(rng, ranges.thick.width)
        if thick_width > base_width:
            break
    else:
        raise ConfigError(
            f"could not draw a thick width above base width {base_width} from "
            f"range {ranges.thick.width} in {_WIDTH_ATTEMPTS} attempts")
    base = _sample_layer("base", base_kind, ranges.base, base_width, rng,
                         ranges, width, height)
    thick = _sample_layer("thick", thick_kind, ranges.thick, thick_width, rng,
                          ranges, width, height)
    return DegradationSpec(
        base=base, thick=thick,
        intensity=_uniform(rng, ranges.intensity),
        seed=int(rng.integers(0, 2 ** 63, dtype=np.uint64)),
        frame_count=ranges.frame_count)

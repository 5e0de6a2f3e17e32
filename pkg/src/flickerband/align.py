"""Registration of captured clips against their reference content.

Captured screen recordings come with black borders, a start-time offset, and
a color cast.  The pipeline here recovers all three: the content rectangle
from border luminance, the integer frame offset from inter-frame difference
signatures, and a per-channel affine color match in CIE L*a*b* (D65, sRGB
transfer).  Images are uint8 RGB in, uint8 RGB out; internal math is float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AlignmentError

MIN_CONTENT_SIDE = 16

# luma coefficients for border detection and difference signatures
_LUMA = np.array([0.2126, 0.7152, 0.0722])

# sRGB <-> XYZ (D65), IEC 61966-2-1 matrix
_RGB_TO_XYZ = np.array([[0.4124564, 0.3575761, 0.1804375],
                        [0.2126729, 0.7151522, 0.0721750],
                        [0.0193339, 0.1191920, 0.9503041]])
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
_WHITE = np.array([0.95047, 1.0, 1.08883])


@dataclass(frozen=True)
class CropRect:
    left: int
    top: int
    width: int
    height: int

    def __post_init__(self):
        if self.left < 0 or self.top < 0:
            raise AlignmentError(f"crop origin must be non-negative, got "
                                 f"({self.left}, {self.top})")
        if self.width < MIN_CONTENT_SIDE or self.height < MIN_CONTENT_SIDE:
            raise AlignmentError(f"content rect {self.width}x{self.height} is below "
                                 f"the {MIN_CONTENT_SIDE} px minimum")

    def slices(self) -> tuple[slice, slice]:
        return (slice(self.top, self.top + self.height),
                slice(self.left, self.left + self.width))


@dataclass(frozen=True)
class LabStats:
    """Per-channel L*a*b* mean and standard deviation."""

    mean: tuple[float, float, float]
    std: tuple[float, float, float]


@dataclass(frozen=True)
class AlignmentReport:
    crop: CropRect
    temporal_offset: int
    source_stats: LabStats
    reference_stats: LabStats
    residual: float

    def __post_init__(self):
        if self.residual < 0.0:
            raise AlignmentError(f"residual must be >= 0, got {self.residual}")


# ---------------------------------------------------------------------------
# color space


def _to_float(image: np.ndarray) -> np.ndarray:
    image = np.asarray(image)
    if image.dtype == np.uint8:
        return image.astype(np.float64) / 255.0
    return image.astype(np.float64)


def luma(image: np.ndarray) -> np.ndarray:
    """Linear-coefficient luma of an RGB (or already-gray) image, in [0, 1]."""
    values = _to_float(image)
    if values.ndim == 2:
        return values
    return values @ _LUMA


def srgb_to_linear(channel: np.ndarray) -> np.ndarray:
    return np.where(channel <= 0.04045, channel / 12.92,
                    ((channel + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(channel: np.ndarray) -> np.ndarray:
    return np.where(channel <= 0.0031308, 12.92 * channel,
                    1.055 * np.power(np.maximum(channel, 0.0), 1.0 / 2.4) - 0.055)


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """float RGB in [0, 1] -> L*a*b*; shape (..., 3) preserved."""
    xyz = srgb_to_linear(np.asarray(rgb, dtype=np.float64)) @ _RGB_TO_XYZ.T / _WHITE
    eps = (6.0 / 29.0) ** 3
    f = np.where(xyz > eps, np.cbrt(xyz), xyz / (3.0 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)
    lightness = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([lightness, a, b], axis=-1)


def lab_to_rgb(lab: np.ndarray) -> np.ndarray:
    """L*a*b* -> float RGB, clamped into [0, 1] (gamut clip)."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    f = np.stack([fy + lab[..., 1] / 500.0, fy, fy - lab[..., 2] / 200.0], axis=-1)
    eps = 6.0 / 29.0
    xyz = np.where(f > eps, f ** 3, 3.0 * eps ** 2 * (f - 4.0 / 29.0)) * _WHITE
    return np.clip(linear_to_srgb(xyz @ _XYZ_TO_RGB.T), 0.0, 1.0)


# ---------------------------------------------------------------------------
# spatial registration


def detect_content_rect(frame: np.ndarray, border_threshold: float = 0.06) -> CropRect:
    """Bounding rectangle of rows/columns whose mean luminance reaches the
    threshold; everything outside is treated as border."""
    values = luma(frame)
    if values.size == 0:
        raise AlignmentError("empty frame")
    row_mean = values.mean(axis=1)
    col_mean = values.mean(axis=0)
    rows = np.nonzero(row_mean >= border_threshold)[0]
    cols = np.nonzero(col_mean >= border_threshold)[0]
    if rows.size == 0 or cols.size == 0:
        raise AlignmentError(f"no content rows/columns above luminance "
                             f"{border_threshold}; frame looks all-border")
    return CropRect(left=int(cols[0]), top=int(rows[0]),
                    width=int(cols[-1] - cols[0] + 1),
                    height=int(rows[-1] - rows[0] + 1))


def _bilinear_resize(image: np.ndarray, width: int, height: int) -> np.ndarray:
    src = _to_float(image)
    src_h, src_w = src.shape[:2]
    if (src_w, src_h) == (width, height):
        return src
    # sample at pixel centers of the target grid mapped into the source grid
    xs = (np.arange(width) + 0.5) * (src_w / width) - 0.5
    ys = (np.arange(height) + 0.5) * (src_h / height) - 0.5
    x0 = np.clip(np.floor(xs), 0, src_w - 1).astype(np.intp)
    y0 = np.clip(np.floor(ys), 0, src_h - 1).astype(np.intp)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = np.clip(xs - x0, 0.0, 1.0)
    fy = np.clip(ys - y0, 0.0, 1.0)
    if src.ndim == 2:
        src = src[..., None]
    top = src[y0][:, x0] * (1 - fx)[None, :, None] + src[y0][:, x1] * fx[None, :, None]
    bot = src[y1][:, x0] * (1 - fx)[None, :, None] + src[y1][:, x1] * fx[None, :, None]
    out = top * (1 - fy)[:, None, None] + bot * fy[:, None, None]
    return out[..., 0] if out.shape[-1] == 1 else out


def crop_and_stretch(frame: np.ndarray, rect: CropRect,
                     target_size: tuple[int, int]) -> np.ndarray:
    """Crop to the content rect and bilinearly resize to (width, height),
    returned as uint8."""
    rows, cols = rect.slices()
    cropped = np.asarray(frame)[rows, cols]
    resized = _bilinear_resize(cropped, target_size[0], target_size[1])
    return np.rint(np.clip(resized, 0.0, 1.0) * 255.0).astype(np.uint8)


# ---------------------------------------------------------------------------
# temporal registration


def difference_signature(frames: Sequence[np.ndarray]) -> np.ndarray:
    """Mean absolute inter-frame luma change; length len(frames) - 1."""
    if len(frames) < 2:
        raise AlignmentError("need at least 2 frames for a difference signature")
    grays = [luma(frame) for frame in frames]
    return np.array([np.abs(grays[i + 1] - grays[i]).mean()
                     for i in range(len(grays) - 1)])


_FLAT_SIGNATURE = 1e-9


def _ncc(a: np.ndarray, b: np.ndarray) -> float | None:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a * a).sum() * (b * b).sum())
    if denom < _FLAT_SIGNATURE:
        return None
    return float((a * b).sum() / denom)


def temporal_offset(source: Sequence[np.ndarray], reference: Sequence[np.ndarray],
                    window: int) -> tuple[int, float]:
    """Integer offset d in [-window, window] such that source[t] best matches
    reference[t + d], plus the residual 1 - NCC at that offset.

    Candidates are tried in order of increasing |d|, so exact score ties
    resolve to the smallest offset magnitude.
    """
    if window < 0:
        raise AlignmentError(f"search window must be >= 0, got {window}")
    if len(source) < window + 2 or len(reference) < window + 2:
        raise AlignmentError(f"sequences must have at least window + 2 = "
                             f"{window + 2} frames")
    sig_src = difference_signature(source)
    sig_ref = difference_signature(reference)
    if sig_src.std() < _FLAT_SIGNATURE or sig_ref.std() < _FLAT_SIGNATURE:
        raise AlignmentError("difference signatures are flat (static video); "
                             "temporal alignment has no confidence")
    best_offset = None
    best_score = -np.inf
    for magnitude in range(window + 1):
        for offset in ((0,) if magnitude == 0 else (-magnitude, magnitude)):
            lo = max(0, -offset)
            hi = min(len(sig_src), len(sig_ref) - offset)
            if hi - lo < 2:
                continue
            score = _ncc(sig_src[lo:hi], sig_ref[lo + offset:hi + offset])
            if score is not None and score > best_score:
                best_score = score
                best_offset = offset
    if best_offset is None:
        raise AlignmentError("no overlapping window produced a usable correlation")
    return best_offset, 1.0 - best_score


# ---------------------------------------------------------------------------
# color registration


def lab_stats(frames) -> LabStats:
    """Channel means/stds over one image or a sequence of images."""
    if isinstance(frames, np.ndarray) and frames.ndim == 3:
        frames = [frames]
    labs = np.concatenate([rgb_to_lab(_to_float(f)).reshape(-1, 3) for f in frames])
    mean = labs.mean(axis=0)
    std = labs.std(axis=0)
    return LabStats(mean=tuple(float(m) for m in mean),
                    std=tuple(float(s) for s in std))


_FLAT_CHANNEL = 1e-9


def lab_color_transfer_float(src_rgb: np.ndarray, ref: LabStats) -> np.ndarray:
    """Affine-match L*a*b* channel statistics; float RGB in, float RGB out
    (gamut-clamped)."""
    for s in ref.std:
        if s <= 0.0:
            raise AlignmentError(f"reference stds must be > 0, got {ref.std}")
    lab = rgb_to_lab(_to_float(src_rgb))
    flat = lab.reshape(-1, 3)
    mean = flat.mean(axis=0)
    std = flat.std(axis=0)
    out = np.empty_like(lab)
    for c in range(3):
        if std[c] < _FLAT_CHANNEL:
            # flat source channel: only the mean is meaningful to transfer
            out[..., c] = ref.mean[c]
        else:
            out[..., c] = (lab[..., c] - mean[c]) * (ref.std[c] / std[c]) + ref.mean[c]
    return lab_to_rgb(out)


def lab_color_transfer(src_rgb: np.ndarray, ref: LabStats) -> np.ndarray:
    """uint8 wrapper around lab_color_transfer_float."""
    return np.rint(lab_color_transfer_float(src_rgb, ref) * 255.0).astype(np.uint8)


# ---------------------------------------------------------------------------
# whole-clip orchestration


def align_sequences(captured: Sequence[np.ndarray], reference: Sequence[np.ndarray],
                    window: int = 15, border_threshold: float = 0.06,
                    per_frame_color: bool = False
                    ) -> tuple[AlignmentReport, list[np.ndarray]]:
    """Full spatial/temporal/color registration of a captured clip.

    Returns the report and the captured frames cropped, stretched to the
    reference resolution, and color-matched.  The temporal offset maps
    aligned frame t to reference frame t + offset; trimming to the overlap
    is left to the caller.
    """
    if not captured or not reference:
        raise AlignmentError("both clips must contain frames")
    rect = detect_content_rect(captured[0], border_threshold)
    ref_h, ref_w = np.asarray(reference[0]).shape[:2]
    spatial = [crop_and_stretch(frame, rect, (ref_w, ref_h)) for frame in captured]
    offset, residual = temporal_offset(spatial, reference, window)
    ref_stats = lab_stats(reference)
    src_stats = lab_stats(spatial)
    if per_frame_color:
        aligned = [lab_color_transfer(frame, lab_stats(ref))
                   for frame, ref in zip(spatial, _matched_refs(spatial, reference, offset))]
    else:
        aligned = [lab_color_transfer(frame, ref_stats) for frame in spatial]
    report = AlignmentReport(crop=rect, temporal_offset=offset,
                             source_stats=src_stats, reference_stats=ref_stats,
                             residual=residual)
    return report, aligned


def _matched_refs(frames: Sequence[np.ndarray], reference: Sequence[np.ndarray],
                  offset: int):
    """Reference frame for each aligned frame, clamped at the clip ends."""
    for t in range(len(frames)):
        yield reference[min(max(t + offset, 0), len(reference) - 1)]

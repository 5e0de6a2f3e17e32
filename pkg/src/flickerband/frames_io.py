"""PNG frame-sequence I/O.

Frames are numbered six-digit PNGs (000000.png, 000001.png, ...).  Degraded
frames are RGB; amplitude maps are stored as single-channel 8-bit PNGs
(value = round(a * 255)), so reading one back loses at most 1/510 per cell.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FrameIOError

FRAME_PATTERN = "{:06d}.png"


def frame_name(index: int) -> str:
    return FRAME_PATTERN.format(index)


def list_frames(directory: Path) -> list[Path]:
    """All .png files in a directory, sorted by name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FrameIOError(f"not a directory: {directory}")
    frames = sorted(directory.glob("*.png"))
    if not frames:
        raise FrameIOError(f"no .png frames in {directory}")
    return frames


def load_rgb(path: Path) -> np.ndarray:
    """Read a frame as (H, W, 3) uint8."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except (OSError, UnidentifiedImageError) as exc:
        raise FrameIOError(f"cannot read frame {path}: {exc}") from exc


def load_gray(path: Path) -> np.ndarray:
    """Read a single-channel map as (H, W) uint8."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("L"))
    except (OSError, UnidentifiedImageError) as exc:
        raise FrameIOError(f"cannot read map {path}: {exc}") from exc


def save_png(path: Path, values: np.ndarray) -> None:
    """Write uint8 image data ((H, W) or (H, W, 3)) as PNG."""
    values = np.asarray(values)
    if values.dtype != np.uint8:
        raise FrameIOError(f"save_png expects uint8 data, got {values.dtype}")
    try:
        Image.fromarray(values).save(path, format="PNG")
    except OSError as exc:
        raise FrameIOError(f"cannot write {path}: {exc}") from exc


def quantize_unit(values: np.ndarray) -> np.ndarray:
    """[0, 1] float -> uint8 by round(v * 255)."""
    return np.rint(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)


def dequantize_unit(values: np.ndarray) -> np.ndarray:
    """uint8 -> [0, 1] float by v / 255."""
    return np.asarray(values, dtype=np.float64) / 255.0


def load_clip(directory: Path) -> list[np.ndarray]:
    return [load_rgb(path) for path in list_frames(directory)]


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def hash_frames(paths: Sequence[Path]) -> list[str]:
    return [sha256_file(path) for path in paths]

"""Stripe-frame coordinate geometry and the plain straight-stripe field.

The banding model lives in a local frame per layer: ``u`` runs parallel to
the stripes, ``v`` runs along their normal.  ``u`` is a pure function of the
pixel and the tilt; ``v`` additionally subtracts a per-frame phase shift so
stripes drift at constant velocity.  Everything here is a pure function of
its arguments and broadcasts over numpy arrays; all math is float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


def _require_finite(name: str, *values: float) -> None:
    for value in values:
        if not math.isfinite(value):
            raise ConfigError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class FrameContext:
    """Pixel grid and frame index a field is evaluated on."""

    width: int
    height: int
    frame_index: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigError(f"frame must be at least 1x1, got {self.width}x{self.height}")
        if self.frame_index < 0:
            raise ConfigError(f"frame index must be >= 0, got {self.frame_index}")

    def pixel_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) coordinate vectors; combine with np.add.outer for full grids."""
        return (np.arange(self.width, dtype=np.float64),
                np.arange(self.height, dtype=np.float64))


@dataclass(frozen=True)
class LayerKinematics:
    """Stripe anchor point, tilt, and constant drift velocity (px/frame)."""

    center_x: float = 0.0
    center_y: float = 0.0
    tilt: float = 0.0
    velocity_x: float = 0.0
    velocity_y: float = 0.0

    def __post_init__(self):
        _require_finite("kinematics", self.center_x, self.center_y, self.tilt,
                        self.velocity_x, self.velocity_y)
        # keep tilt in [-pi, pi) so specs serialize canonically
        wrapped = math.remainder(self.tilt, 2.0 * math.pi)
        if wrapped >= math.pi:
            wrapped -= 2.0 * math.pi
        object.__setattr__(self, "tilt", wrapped)


@dataclass(frozen=True)
class StripeBand:
    """One stripe lattice: painted width, gap, and edge feather, in pixels.

    The lattice period is width + gap by construction.
    """

    width: float
    gap: float
    feather: float

    def __post_init__(self):
        _require_finite("band", self.width, self.gap, self.feather)
        if self.width < 1.0:
            raise ConfigError(f"stripe width must be >= 1 px, got {self.width}")
        if self.gap < 0.0:
            raise ConfigError(f"stripe gap must be >= 0 px, got {self.gap}")
        if not (0.0 < self.feather <= self.width / 2.0):
            raise ConfigError(
                f"feather must be in (0, width/2], got {self.feather} for width {self.width}")

    @property
    def period(self) -> float:
        return self.width + self.gap


def parallel_coord(x, y, kin: LayerKinematics):
    """Coordinate along the stripe direction.

    Deliberately independent of the layer center: translating the anchor
    (e.g. to realize drift as a center shift) must not slide noise sampled
    along the stripes.
    """
    return x * math.cos(kin.tilt) + y * math.sin(kin.tilt)


def project_static(x, y, kin: LayerKinematics):
    """Signed distance of (x, y) from the anchor along the stripe normal."""
    return -(x - kin.center_x) * math.sin(kin.tilt) + (y - kin.center_y) * math.cos(kin.tilt)


def phase_shift(t, kin: LayerKinematics):
    """Drift accumulated by frame t, projected onto the stripe normal."""
    return -(kin.velocity_x * t) * math.sin(kin.tilt) + (kin.velocity_y * t) * math.cos(kin.tilt)


def orthogonal_coord(x, y, t, kin: LayerKinematics):
    """Normal-axis coordinate at frame t: static projection minus drift."""
    return project_static(x, y, kin) - phase_shift(t, kin)


def round_half_away(q):
    """Round to nearest integer, ties away from zero. Works on arrays."""
    q = np.asarray(q, dtype=np.float64)
    return np.copysign(np.floor(np.abs(q) + 0.5), q)


def stripe_index(v, band: StripeBand):
    """Nearest stripe index and its center coordinate.

    Returns (k, v_c) with k = round(v / period) (ties away from zero) and
    v_c = k * period, so |v - v_c| <= period/2 up to rounding.
    """
    k = round_half_away(np.asarray(v, dtype=np.float64) / band.period)
    return k, k * band.period


def smoothstep(edge0: float, edge1: float, d):
    """Clamped cubic Hermite ramp: 0 below edge0, 1 above edge1, C1 between."""
    if not edge0 < edge1:
        raise ConfigError(f"smoothstep needs edge0 < edge1, got {edge0} >= {edge1}")
    x = np.clip((np.asarray(d, dtype=np.float64) - edge0) / (edge1 - edge0), 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def feathered_occupancy(distance, feather: float):
    """Occupancy from a signed boundary distance (negative = inside)."""
    return 1.0 - smoothstep(-feather, feather, distance)


def uniform_occupancy(x, y, t, kin: LayerKinematics, band: StripeBand):
    """Straight-edged periodic stripes; the baseline all other kinds extend."""
    v = orthogonal_coord(x, y, t, kin)
    _, v_c = stripe_index(v, band)
    d = np.abs(v - v_c) - band.width / 2.0
    return feathered_occupancy(d, band.feather)

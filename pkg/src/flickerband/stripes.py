"""The five stripe geometries: uniform, curve, cracked, diamond, complex.

Uniform, curve, and diamond are closed-form; cracked and complex draw
per-stripe noise from counter-based streams keyed by stripe index, so a
stripe keeps its cracks and jitters while it drifts across frames and the
result is independent of evaluation order.

Every generator exposes two evaluation paths:

* ``occupancy(x, y, t)`` -- pure broadcasting math on arbitrary coordinates;
* ``occupancy_frame(ctx)`` -- full-frame evaluation that caches everything
  constant along the stripe axis (noise lookups, curve displacement, shear
  ramps), leaving only normal-axis work per frame.  Both paths compute the
  identical field.

Noise sampled along the stripe axis wraps around its sample buffer, making
the fields periodic far from the frame rather than undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .geometry import (FrameContext, LayerKinematics, StripeBand, feathered_occupancy,
                       orthogonal_coord, parallel_coord, phase_shift, stripe_index,
                       uniform_occupancy)
from .noise import smoothed_noise_1d, smoothed_noise_2d
from .rng import KeyPath

STRIPE_KINDS = ("uniform", "curve", "cracked", "diamond", "complex")

DEFAULT_NOISE_SAMPLES = 2048
DEFAULT_BLUR_SHAPE = (256, 256)


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class CurveParams:
    """Quadratic bow of the stripe lattice along the stripe axis."""

    amplitude: float          # peak deflection in px at |u - u_mid| == u_span
    sign: int                 # bow direction, +1 or -1
    offset: float             # constant recentering shift subtracted from the bow
    u_mid: float              # stripe-axis center of the frame
    u_span: float             # stripe-axis half-extent of the frame

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ConfigError(f"curve amplitude must be >= 0, got {self.amplitude}")
        if self.sign not in (-1, 1):
            raise ConfigError(f"curve sign must be +1 or -1, got {self.sign}")
        if self.u_span <= 0.0:
            raise ConfigError(f"curve u_span must be > 0, got {self.u_span}")


@dataclass(frozen=True)
class CrackedParams:
    """Longitudinal cracks eaten into a hard stripe backbone."""

    keep_ratio: float         # intact core half-width as a fraction of W/2
    crack_count: int          # cracks per stripe
    crack_width: float        # nominal crack width in px
    jitter_ratio: float       # relative width modulation by smoothed noise
    smoothing: float          # noise kernel sigma, in samples
    noise_samples: int = DEFAULT_NOISE_SAMPLES

    def __post_init__(self):
        if not 0.0 < self.keep_ratio <= 1.0:
            raise ConfigError(f"keep_ratio must be in (0, 1], got {self.keep_ratio}")
        if self.crack_count < 0:
            raise ConfigError(f"crack_count must be >= 0, got {self.crack_count}")
        if self.crack_width <= 0.0:
            raise ConfigError(f"crack_width must be > 0, got {self.crack_width}")
        if self.jitter_ratio < 0.0:
            raise ConfigError(f"jitter_ratio must be >= 0, got {self.jitter_ratio}")
        if self.smoothing <= 0.0:
            raise ConfigError(f"smoothing must be > 0, got {self.smoothing}")
        if self.noise_samples < 2:
            raise ConfigError(f"noise_samples must be >= 2, got {self.noise_samples}")


@dataclass(frozen=True)
class DiamondParams:
    """Periodic shear cuts that crop the stripe into diamond cells."""

    length: float             # shear period along the stripe axis, px
    size_ratio: float         # cell core height as a fraction of W, (0, 1]

    def __post_init__(self):
        if self.length <= 0.0:
            raise ConfigError(f"diamond length must be > 0, got {self.length}")
        if not 0.0 < self.size_ratio <= 1.0:
            raise ConfigError(f"size_ratio must be in (0, 1], got {self.size_ratio}")

    def shear(self, band: StripeBand) -> float:
        """Slope of the cut boundaries; 0 when size_ratio is 1."""
        return band.width * (1.0 - self.size_ratio) / self.length


@dataclass(frozen=True)
class ComplexParams:
    """Torn, unevenly wide stripes: per-stripe width/spacing jitter, noisy
    edges, and a global blur field perturbing the boundary distance."""

    width_jitter: float       # per-stripe width offset bound, px
    spacing_jitter: float     # per-stripe center offset bound, px
    edge_amplitude: float     # peak edge displacement, px
    wiggle_amplitude: float   # scale of the slow width fluctuation, px
    wiggle_smoothing: float   # sigma of the width fluctuation noise
    edge_smoothing: float     # sigma of the edge noises (small = torn edges)
    blur_weight: float        # scale of the 2D blur field, px
    blur_smoothing: float     # sigma of the 2D blur field
    noise_samples: int = DEFAULT_NOISE_SAMPLES
    blur_shape: tuple[int, int] = DEFAULT_BLUR_SHAPE

    def __post_init__(self):
        for name in ("width_jitter", "spacing_jitter", "edge_amplitude",
                     "wiggle_amplitude", "blur_weight"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("wiggle_smoothing", "edge_smoothing", "blur_smoothing"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.noise_samples < 2:
            raise ConfigError(f"noise_samples must be >= 2, got {self.noise_samples}")
        if min(self.blur_shape) < 2:
            raise ConfigError(f"blur_shape dims must be >= 2, got {self.blur_shape}")


# ---------------------------------------------------------------------------
# closed-form occupancy functions


def curve_displacement(u, p: CurveParams):
    q = (np.asarray(u, dtype=np.float64) - p.u_mid) / p.u_span
    return p.sign * p.amplitude * q * q - p.offset


def curve_occupancy(x, y, t, kin: LayerKinematics, band: StripeBand, p: CurveParams):
    """Uniform stripes with the lattice coordinate bowed by curve_displacement.

    The stripe index follows the bowed coordinate, so stripes stay unbroken
    at any amplitude instead of being clipped at the undeformed cell edges.
    """
    u = parallel_coord(x, y, kin)
    shifted = orthogonal_coord(x, y, t, kin) - curve_displacement(u, p)
    _, v_c = stripe_index(shifted, band)
    d = np.abs(shifted - v_c) - band.width / 2.0
    return feathered_occupancy(d, band.feather)


def diamond_occupancy(x, y, t, kin: LayerKinematics, band: StripeBand, p: DiamondParams):
    """Uniform stripes intersected with a periodic sheared band per cell."""
    u = parallel_coord(x, y, kin)
    v = orthogonal_coord(x, y, t, kin)
    _, v_c = stripe_index(v, band)
    ramp = p.shear(band) * (np.mod(u, p.length) - p.length / 2.0)
    half_core = 0.5 * band.width * p.size_ratio
    rel = v - v_c + ramp
    inside = (np.abs(rel) <= half_core).astype(np.float64)
    return inside * uniform_occupancy(x, y, t, kin, band)


# ---------------------------------------------------------------------------
# noise lookup helpers


def _wrap_lerp(values: np.ndarray, pos):
    """Linear interpolation into a 1D buffer, wrapping at its end."""
    n = len(values)
    wrapped = np.remainder(np.asarray(pos, dtype=np.float64), n)
    i0 = wrapped.astype(np.intp)
    frac = wrapped - i0
    i1 = i0 + 1
    if i1.ndim == 0:
        i1 = i1 % n
    else:
        i1[i1 == n] = 0
    out = values[i0] * (1.0 - frac)
    out += values[i1] * frac
    return out


def _wrap_lerp_rows(table: np.ndarray, rows, pos):
    """Row-wise variant: value j comes from table[rows[j]] at pos[j]."""
    n = table.shape[1]
    wrapped = np.remainder(np.asarray(pos, dtype=np.float64), n)
    i0 = wrapped.astype(np.intp)
    frac = wrapped - i0
    i1 = i0 + 1
    if i1.ndim == 0:
        i1 = i1 % n
    else:
        i1[i1 == n] = 0
    flat = table.ravel()
    base = np.asarray(rows) * n
    out = flat[base + i0] * (1.0 - frac)
    out += flat[base + i1] * frac
    return out


def _wrap_nearest_2d(field: np.ndarray, u, v):
    """Nearest-sample lookup into a 2D buffer, wrapping both axes."""
    rows, cols = field.shape
    iu = np.remainder(np.asarray(u, dtype=np.float64), cols).astype(np.intp)
    iv = np.remainder(np.asarray(v, dtype=np.float64), rows).astype(np.intp)
    return field.ravel()[iv * cols + iu]


def _stripe_indices(v, period: float):
    """Integer stripe index, ties away from zero; astype truncates toward
    zero so adding copysign(0.5) reproduces round-half-away exactly."""
    q = np.asarray(v, dtype=np.float64) / period
    return (q + np.copysign(0.5, q)).astype(np.intp)


def _feather_inplace(d: np.ndarray, feather: float) -> np.ndarray:
    """feathered_occupancy with the identical operation sequence, but fused
    in place: d is destroyed and becomes the result."""
    d += feather
    d /= feather - (-feather)
    np.clip(d, 0.0, 1.0, out=d)
    occ = d * d
    d *= 2.0
    np.subtract(3.0, d, out=d)
    occ *= d
    np.subtract(1.0, occ, out=occ)
    return occ


# ---------------------------------------------------------------------------
# per-frame grid cache shared by the generators


class _FrameGrid:
    """Static per-frame-size geometry for one layer: coordinates along the
    stripe axis never change with t, so anything derived from u is baked."""

    def __init__(self, ctx: FrameContext, kin: LayerKinematics):
        x, y = ctx.pixel_grid()
        cos_t = np.cos(kin.tilt)
        sin_t = np.sin(kin.tilt)
        self.u = np.add.outer(y * sin_t, x * cos_t)
        self.v_static = np.add.outer((y - kin.center_y) * cos_t,
                                     -(x - kin.center_x) * sin_t)


class StripeGenerator:
    """Base: binds band + kinematics, provides the cached-grid plumbing."""

    kind: str = "uniform"

    def __init__(self, band: StripeBand, kin: LayerKinematics):
        self.band = band
        self.kin = kin
        self._grids: dict[tuple[int, int], _FrameGrid] = {}

    def _grid(self, ctx: FrameContext) -> _FrameGrid:
        key = (ctx.width, ctx.height)
        grid = self._grids.get(key)
        if grid is None:
            grid = self._grids[key] = _FrameGrid(ctx, self.kin)
            self._bake(grid)
        return grid

    def _bake(self, grid: _FrameGrid) -> None:
        """Hook: attach u-derived arrays to the grid."""

    def occupancy(self, x, y, t):
        raise NotImplementedError

    def occupancy_frame(self, ctx: FrameContext) -> np.ndarray:
        """Full-frame field at ctx.frame_index, shape (height, width)."""
        grid = self._grid(ctx)
        v = grid.v_static - phase_shift(ctx.frame_index, self.kin)
        return self._from_uv(grid, v)

    def _from_uv(self, grid: _FrameGrid, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class UniformStripes(StripeGenerator):
    kind = "uniform"

    def occupancy(self, x, y, t):
        return uniform_occupancy(x, y, t, self.kin, self.band)

    def _from_uv(self, grid, v):
        _, v_c = stripe_index(v, self.band)
        d = np.abs(v - v_c)
        d -= self.band.width / 2.0
        return _feather_inplace(d, self.band.feather)


class CurveStripes(StripeGenerator):
    kind = "curve"

    def __init__(self, band, kin, params: CurveParams):
        super().__init__(band, kin)
        self.params = params

    def occupancy(self, x, y, t):
        return curve_occupancy(x, y, t, self.kin, self.band, self.params)

    def _bake(self, grid):
        grid.bow = curve_displacement(grid.u, self.params)

    def _from_uv(self, grid, v):
        shifted = v - grid.bow
        _, v_c = stripe_index(shifted, self.band)
        d = np.abs(shifted - v_c)
        d -= self.band.width / 2.0
        return _feather_inplace(d, self.band.feather)


class DiamondStripes(StripeGenerator):
    kind = "diamond"

    def __init__(self, band, kin, params: DiamondParams):
        super().__init__(band, kin)
        self.params = params

    def occupancy(self, x, y, t):
        return diamond_occupancy(x, y, t, self.kin, self.band, self.params)

    def _bake(self, grid):
        p = self.params
        grid.ramp = p.shear(self.band) * (np.mod(grid.u, p.length) - p.length / 2.0)

    def _from_uv(self, grid, v):
        _, v_c = stripe_index(v, self.band)
        rel = v - v_c
        d = np.abs(rel)
        d -= self.band.width / 2.0
        occ = _feather_inplace(d, self.band.feather)
        half_core = 0.5 * self.band.width * self.params.size_ratio
        rel += grid.ramp
        np.abs(rel, out=rel)
        occ *= rel <= half_core
        return occ


class CrackedStripes(StripeGenerator):
    """Hard backbone (feathered at its boundary) unioned with hard cracks.

    Crack centers, sides, and width noise are drawn per stripe index from
    the layer's key path, so every stripe fractures its own way and keeps
    that fracture while drifting.
    """

    kind = "cracked"

    def __init__(self, band, kin, params: CrackedParams, key: KeyPath):
        super().__init__(band, kin)
        self.params = params
        self.key = key
        self._draws: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def keep_halfwidth(self) -> float:
        return self.params.keep_ratio * self.band.width / 2.0

    def stripe_cracks(self, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(centers, sides, width_noise) for stripe k; memoized, order-free."""
        cached = self._draws.get(k)
        if cached is not None:
            return cached
        p = self.params
        geom = self.key.child("stripe", k, "crack-geom").rng()
        centers = geom.uniform(self.keep_halfwidth, self.band.width / 2.0, p.crack_count)
        sides = geom.integers(0, 2, p.crack_count) * 2.0 - 1.0
        widths = np.empty((p.crack_count, p.noise_samples))
        for i in range(p.crack_count):
            widths[i] = smoothed_noise_1d(
                p.noise_samples, p.smoothing,
                self.key.child("stripe", k, "crack-width", i).rng())
        result = (centers, sides, widths)
        self._draws[k] = result
        return result

    def _tables_for(self, ki: np.ndarray):
        """Per-stripe draw tables plus the row index of each pixel.

        Dense ranges suit frames (every stripe in range appears); sparse
        queries touching few stripes over a huge index span instead draw
        only the stripes actually hit.
        """
        k_lo = int(ki.min())
        k_hi = int(ki.max())
        if k_hi - k_lo + 1 > ki.size:
            uniq, rows = np.unique(ki, return_inverse=True)
            stripes = [self.stripe_cracks(int(k)) for k in uniq]
        else:
            rows = ki - k_lo
            stripes = [self.stripe_cracks(k) for k in range(k_lo, k_hi + 1)]
        centers = np.stack([s[0] for s in stripes])
        sides = np.stack([s[1] for s in stripes])
        widths = np.stack([s[2] for s in stripes])
        return (centers, sides, widths), rows

    def occupancy(self, x, y, t):
        u = parallel_coord(x, y, self.kin)
        v = orthogonal_coord(x, y, t, self.kin)
        return self._evaluate(np.asarray(u, dtype=np.float64),
                              np.asarray(v, dtype=np.float64))

    def _from_uv(self, grid, v):
        return self._evaluate(grid.u, v)

    def _evaluate(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        p = self.params
        band = self.band
        scalar = np.ndim(v) == 0 and np.ndim(u) == 0
        u = np.atleast_1d(u)
        v = np.atleast_1d(v)
        ki = _stripe_indices(v, band.period)
        rel = v - ki * band.period
        backbone = np.abs(rel) - self.keep_halfwidth
        occ = feathered_occupancy(backbone, band.feather)
        if p.crack_count > 0:
            (centers, sides, widths), rows = self._tables_for(ki)
            for i in range(p.crack_count):
                offset = sides[rows, i] * centers[rows, i]
                noise = _wrap_lerp_rows(widths[:, i, :], rows, u)
                half = 0.5 * p.crack_width * (1.0 + p.jitter_ratio * noise)
                hit = np.abs(rel - offset) <= half
                occ = np.maximum(occ, hit)
        return occ[0] if scalar else occ


class ComplexStripes(StripeGenerator):
    """Stripes with jittered widths/centers, noisy edges, and a blur field.

    Layer-wide noise (width wiggle, two edge noises, the 2D blur field) is
    baked at construction; per-stripe scalar jitters come from streams keyed
    by stripe index.
    """

    kind = "complex"

    def __init__(self, band, kin, params: ComplexParams, key: KeyPath):
        super().__init__(band, kin)
        self.params = params
        self.key = key
        p = params
        self.wiggle = p.wiggle_amplitude * smoothed_noise_1d(
            p.noise_samples, p.wiggle_smoothing, key.child("wiggle").rng())
        self.edge_top = smoothed_noise_1d(
            p.noise_samples, p.edge_smoothing, key.child("edge-top").rng())
        self.edge_bot = smoothed_noise_1d(
            p.noise_samples, p.edge_smoothing, key.child("edge-bot").rng())
        rows, cols = p.blur_shape
        self.blur_field = smoothed_noise_2d(
            cols, rows, p.blur_smoothing, key.child("blur").rng())
        self._blur_scaled = p.blur_weight * self.blur_field
        self._draws: dict[int, tuple[float, float, float, float]] = {}

    def stripe_jitter(self, k: int) -> tuple[float, float, float, float]:
        """(width offset, center offset, top scale, bottom scale) for stripe k."""
        cached = self._draws.get(k)
        if cached is not None:
            return cached
        p = self.params
        rng = self.key.child("stripe", k, "jitter").rng()
        dw = rng.uniform(-p.width_jitter, p.width_jitter)
        ds = rng.uniform(-p.spacing_jitter, p.spacing_jitter)
        gt = rng.uniform(0.6, 1.0)
        gb = rng.uniform(0.6, 1.0)
        result = (dw, ds, gt, gb)
        self._draws[k] = result
        return result

    def _tables_for(self, ki: np.ndarray):
        """Per-stripe columns ready for the distance math, plus each pixel's
        row index: [W + dw, k*T + ds, edge_amplitude*gt, edge_amplitude*gb].
        Sparse queries over a huge stripe span draw only the stripes hit."""
        p = self.params
        k_lo = int(ki.min())
        k_hi = int(ki.max())
        if k_hi - k_lo + 1 > ki.size:
            stripes, rows = np.unique(ki, return_inverse=True)
        else:
            stripes = np.arange(k_lo, k_hi + 1)
            rows = ki - k_lo
        table = np.array([self.stripe_jitter(int(k)) for k in stripes])
        table[:, 0] += self.band.width
        table[:, 1] += stripes * self.band.period
        table[:, 2] *= p.edge_amplitude
        table[:, 3] *= p.edge_amplitude
        return table, rows

    def occupancy(self, x, y, t):
        u = parallel_coord(x, y, self.kin)
        v = orthogonal_coord(x, y, t, self.kin)
        u = np.asarray(u, dtype=np.float64)
        return self._evaluate(u, np.asarray(v, dtype=np.float64),
                              _wrap_lerp(self.wiggle, u),
                              _wrap_lerp(self.edge_top, u),
                              _wrap_lerp(self.edge_bot, u))

    def _bake(self, grid):
        grid.wiggle = _wrap_lerp(self.wiggle, grid.u)
        grid.edge_top = _wrap_lerp(self.edge_top, grid.u)
        grid.edge_bot = _wrap_lerp(self.edge_bot, grid.u)
        cols = self.params.blur_shape[1]
        grid.blur_col = np.remainder(grid.u, cols).astype(np.intp)

    def _evaluate(self, u, v, wiggle, edge_top, edge_bot):
        """Reference path: straightforward expression of the boundary math."""
        band = self.band
        scalar = np.ndim(v) == 0 and np.ndim(u) == 0
        u = np.atleast_1d(u)
        v = np.atleast_1d(v)
        ki = _stripe_indices(v, band.period)
        table, rows = self._tables_for(ki)
        width = np.maximum(table[rows, 0] + wiggle, 1.0)
        center = table[rows, 1]
        gap_top = center + 0.5 * width + table[rows, 2] * edge_top - v
        gap_bot = v - (center - 0.5 * width + table[rows, 3] * edge_bot)
        d = -np.minimum(gap_top, gap_bot)
        d -= _wrap_nearest_2d(self._blur_scaled, u, v)
        occ = feathered_occupancy(d, band.feather)
        return occ[0] if scalar else occ

    def _from_uv(self, grid, v):
        """Frame path: same math as _evaluate with fused in-place passes;
        agreement between the two is pinned by tests."""
        p = self.params
        band = self.band
        ki = _stripe_indices(v, band.period)
        table, rows = self._tables_for(ki)
        half = table[rows, 0]
        half += grid.wiggle
        np.maximum(half, 1.0, out=half)
        half *= 0.5
        center = table[rows, 1]
        gap_top = table[rows, 2]
        gap_top *= grid.edge_top
        gap_top += center
        gap_top += half
        gap_top -= v
        gap_bot = table[rows, 3]
        gap_bot *= grid.edge_bot
        gap_bot -= half
        gap_bot += center          # v_bot = center - half + edge term
        np.subtract(v, gap_bot, out=gap_bot)
        d = np.minimum(gap_top, gap_bot, out=gap_top)
        np.negative(d, out=d)
        blur_rows = p.blur_shape[0]
        iv = np.remainder(v, blur_rows).astype(np.intp)
        iv *= p.blur_shape[1]
        iv += grid.blur_col
        d -= self._blur_scaled.ravel()[iv]
        return _feather_inplace(d, band.feather)


def make_generator(kind: str, band: StripeBand, kin: LayerKinematics,
                   params, key: Optional[KeyPath] = None) -> StripeGenerator:
    """Build the generator for a stripe kind; noisy kinds need a key path."""
    if kind == "uniform":
        return UniformStripes(band, kin)
    if kind == "curve":
        return CurveStripes(band, kin, params)
    if kind == "diamond":
        return DiamondStripes(band, kin, params)
    if kind in ("cracked", "complex"):
        if key is None:
            raise ConfigError(f"{kind} stripes need an rng key path")
        cls = CrackedStripes if kind == "cracked" else ComplexStripes
        return cls(band, kin, params, key)
    raise ConfigError(f"unknown stripe kind {kind!r}, expected one of {STRIPE_KINDS}")

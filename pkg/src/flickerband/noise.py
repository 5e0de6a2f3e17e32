"""Band-limited Gaussian noise, normalized to zero mean and unit variance.

White normal draws are smoothed with a discrete Gaussian kernel (truncated
at 3 sigma, reflect padding so there is no wrap seam), then Z-scored.  The
mean subtraction makes the perturbation fields honestly zero-centered;
plain variance division alone would leave a seed-dependent DC offset.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError

# std below this means the smoothed draw collapsed to a constant
_FLAT_STD = 1e-12


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Discrete Gaussian taps over [-3 sigma, 3 sigma], summing to 1."""
    if sigma <= 0.0:
        raise ConfigError(f"kernel sigma must be > 0, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    ticks = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (ticks / sigma) ** 2)
    return kernel / kernel.sum()


def _smooth_1d(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    radius = (len(kernel) - 1) // 2
    if radius == 0:
        return values.copy()
    padded = np.pad(values, radius, mode="reflect")
    return np.convolve(padded, kernel, mode="valid")


def zscore(values: np.ndarray) -> np.ndarray:
    """(x - mean) / std over the whole array; rejects flat input."""
    std = float(values.std())
    if std < _FLAT_STD:
        raise ConfigError("noise field is degenerate-flat; cannot normalize to unit variance")
    return (values - values.mean()) / std


def smoothed_noise_1d(length: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """1D smoothed noise sequence: unit variance, zero mean, length samples."""
    if length < 2:
        raise ConfigError(f"1d noise needs length >= 2 (variance undefined below), got {length}")
    white = rng.standard_normal(length)
    return zscore(_smooth_1d(white, gaussian_kernel(sigma)))


def smoothed_noise_2d(width: int, height: int, sigma: float,
                      rng: np.random.Generator) -> np.ndarray:
    """2D smoothed noise field, shape (height, width), Z-scored globally.

    Smoothing is separable: the 1D kernel runs along rows, then columns.
    """
    if width < 2 or height < 2:
        raise ConfigError(f"2d noise needs both dims >= 2, got {width}x{height}")
    kernel = gaussian_kernel(sigma)
    field = rng.standard_normal((height, width))
    field = np.apply_along_axis(_smooth_1d, 1, field, kernel)
    field = np.apply_along_axis(_smooth_1d, 0, field, kernel)
    return zscore(field)

"""Batch-pipeline configuration and its on-disk text form.

The config file uses the same key-value text as manifests.  Every key is
optional except the directories; unknown keys are rejected so typos fail
loudly instead of silently running with defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .compositor import BandRanges, SamplerRanges, validate_ranges
from .errors import ConfigError
from .manifest import parse_kv


@dataclass
class PipelineConfig:
    input_dir: Path
    output_dir: Path
    clip_length: int = 16
    seed: int = 0
    workers: int = 1
    emit_fields: bool = False
    emit_preview: bool = False
    ranges: SamplerRanges = field(default_factory=SamplerRanges)

    def validate(self) -> None:
        if self.input_dir.resolve() == self.output_dir.resolve():
            raise ConfigError("input and output directories must be distinct")
        if self.clip_length < 1:
            raise ConfigError(f"clip_length must be >= 1, got {self.clip_length}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        validate_ranges(self.sampler_ranges())

    def sampler_ranges(self) -> SamplerRanges:
        """Ranges with the clip length folded in."""
        return replace(self.ranges, frame_count=self.clip_length)


def _as_pair(name: str, value) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{name} must be a two-element range [lo, hi], got {value!r}")
    try:
        return float(value[0]), float(value[1])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} has non-numeric bounds: {value!r}") from exc


def _as_int_pair(name: str, value) -> tuple[int, int]:
    lo, hi = _as_pair(name, value)
    if lo != int(lo) or hi != int(hi):
        raise ConfigError(f"{name} must have integer bounds, got {value!r}")
    return int(lo), int(hi)


def _as_kinds(name: str, value) -> tuple[str, ...]:
    if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{name} must be a list of stripe kinds, got {value!r}")
    return tuple(value)


def _band_ranges(name: str, section: dict, default: BandRanges) -> BandRanges:
    known = {"width", "gap", "feather", "tilt", "velocity", "center_frac"}
    _reject_unknown(name, section, known)
    updates = {key: _as_pair(f"{name}.{key}", section[key])
               for key in known if key in section}
    return replace(default, **updates)


def _reject_unknown(name: str, section: dict, known: set[str]) -> None:
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown keys under {name}: {sorted(unknown)}")


_SCALAR_RANGE_KEYS = {
    "intensity": "intensity",
    "curve_amplitude": "curve_amplitude",
    "cracked_keep_ratio": "cracked_keep_ratio",
    "cracked_width": "cracked_width",
    "cracked_jitter": "cracked_jitter",
    "cracked_smoothing": "cracked_smoothing",
    "diamond_length": "diamond_length",
    "diamond_ratio": "diamond_ratio",
    "complex_width_jitter": "complex_width_jitter",
    "complex_spacing_jitter": "complex_spacing_jitter",
    "complex_edge_amplitude": "complex_edge_amplitude",
    "complex_wiggle_amplitude": "complex_wiggle_amplitude",
    "complex_wiggle_smoothing": "complex_wiggle_smoothing",
    "complex_edge_smoothing": "complex_edge_smoothing",
    "complex_blur_weight": "complex_blur_weight",
    "complex_blur_smoothing": "complex_blur_smoothing",
}


def ranges_from_record(record: dict) -> SamplerRanges:
    known = (set(_SCALAR_RANGE_KEYS) |
             {"base", "thick", "base_kinds", "thick_kinds", "cracked_count"})
    _reject_unknown("ranges", record, known)
    ranges = SamplerRanges()
    updates = {}
    for key, attr in _SCALAR_RANGE_KEYS.items():
        if key in record:
            updates[attr] = _as_pair(f"ranges.{key}", record[key])
    if "cracked_count" in record:
        updates["cracked_count"] = _as_int_pair("ranges.cracked_count",
                                                record["cracked_count"])
    if "base_kinds" in record:
        updates["base_kinds"] = _as_kinds("ranges.base_kinds", record["base_kinds"])
    if "thick_kinds" in record:
        updates["thick_kinds"] = _as_kinds("ranges.thick_kinds", record["thick_kinds"])
    if "base" in record:
        updates["base"] = _band_ranges("ranges.base", record["base"], ranges.base)
    if "thick" in record:
        updates["thick"] = _band_ranges("ranges.thick", record["thick"], ranges.thick)
    return replace(ranges, **updates)


def config_from_record(record: dict) -> PipelineConfig:
    known = {"input_dir", "output_dir", "clip_length", "seed", "workers",
             "emit_fields", "emit_preview", "ranges"}
    _reject_unknown("config", record, known)
    for required in ("input_dir", "output_dir"):
        if required not in record:
            raise ConfigError(f"config is missing required key {required!r}")
    ranges_record = record.get("ranges", {})
    if not isinstance(ranges_record, dict):
        raise ConfigError("ranges must be a section")
    config = PipelineConfig(
        input_dir=Path(str(record["input_dir"])),
        output_dir=Path(str(record["output_dir"])),
        ranges=ranges_from_record(ranges_record))
    for key in ("clip_length", "seed", "workers"):
        if key in record:
            value = record[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            setattr(config, key, value)
    for key in ("emit_fields", "emit_preview"):
        if key in record:
            value = record[key]
            if not isinstance(value, bool):
                raise ConfigError(f"{key} must be true or false, got {value!r}")
            setattr(config, key, value)
    return config


def load_config(path: Path) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_record(parse_kv(text))

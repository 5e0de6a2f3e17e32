"""Human-readable structured text for manifests and config files.

The format is deliberately tiny: ``key: value`` pairs, nesting by two-space
indentation, inline lists in brackets.  Floats are written with repr() so a
parsed manifest reproduces every sampled parameter bit for bit; that is what
makes re-rendering from a manifest byte-identical.
"""

from __future__ import annotations

from typing import Any

from .compositor import DegradationSpec, StripeLayerSpec
from .errors import ConfigError
from .geometry import LayerKinematics, StripeBand
from .stripes import ComplexParams, CrackedParams, CurveParams, DiamondParams

FORMAT_NAME = "flickerband-manifest"
FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# key-value text


def _format_scalar(value) -> str:
    if value is None:
        return "~"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    text = str(value)
    if any(ch in text for ch in ':#[],"\n') or text != text.strip():
        raise ConfigError(f"string value not representable in kv text: {text!r}")
    # quote anything that would otherwise re-parse as a different type
    if text == "" or _parse_scalar(text) != text:
        return f'"{text}"'
    return text


def _parse_scalar(text: str):
    text = text.strip()
    if len(text) >= 2 and text.startswith('"') and text.endswith('"'):
        return text[1:-1]
    if text == "~":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def dump_kv(data: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            if value:
                lines.append(dump_kv(value, indent + 1))
        elif isinstance(value, (list, tuple)):
            inner = ", ".join(_format_scalar(v) for v in value)
            lines.append(f"{pad}{key}: [{inner}]")
        else:
            lines.append(f"{pad}{key}: {_format_scalar(value)}")
    return "\n".join(lines)


def parse_kv(text: str) -> dict:
    """Parse the nested key-value format back into dicts/lists/scalars."""
    root: dict[str, Any] = {}
    # (indent, container) for each open nesting level
    stack: list[tuple[int, dict]] = [(0, root)]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        if indent % 2:
            raise ConfigError(f"line {lineno}: odd indentation")
        level = indent // 2
        while stack and stack[-1][0] > level:
            stack.pop()
        if not stack or stack[-1][0] != level:
            raise ConfigError(f"line {lineno}: indentation level {level} has no parent")
        container = stack[-1][1]
        body = raw.strip()
        if ":" not in body:
            raise ConfigError(f"line {lineno}: expected 'key: value', got {body!r}")
        key, _, value = body.partition(":")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in container:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if value == "":
            child: dict[str, Any] = {}
            container[key] = child
            stack.append((level + 1, child))
        elif value.startswith("[") and value.endswith("]"):
            inner = value[1:-1].strip()
            container[key] = ([] if not inner
                              else [_parse_scalar(part) for part in inner.split(",")])
        else:
            container[key] = _parse_scalar(value)
    return root


# ---------------------------------------------------------------------------
# spec <-> record


def _band_record(band: StripeBand) -> dict:
    return {"width": band.width, "gap": band.gap, "feather": band.feather}


def _kinematics_record(kin: LayerKinematics) -> dict:
    return {"center_x": kin.center_x, "center_y": kin.center_y, "tilt": kin.tilt,
            "velocity_x": kin.velocity_x, "velocity_y": kin.velocity_y}


def _params_record(kind: str, params) -> dict:
    if kind == "uniform":
        return {}
    if kind == "curve":
        return {"amplitude": params.amplitude, "sign": params.sign,
                "offset": params.offset, "u_mid": params.u_mid, "u_span": params.u_span}
    if kind == "cracked":
        return {"keep_ratio": params.keep_ratio, "crack_count": params.crack_count,
                "crack_width": params.crack_width, "jitter_ratio": params.jitter_ratio,
                "smoothing": params.smoothing, "noise_samples": params.noise_samples}
    if kind == "diamond":
        return {"length": params.length, "size_ratio": params.size_ratio}
    if kind == "complex":
        return {"width_jitter": params.width_jitter,
                "spacing_jitter": params.spacing_jitter,
                "edge_amplitude": params.edge_amplitude,
                "wiggle_amplitude": params.wiggle_amplitude,
                "wiggle_smoothing": params.wiggle_smoothing,
                "edge_smoothing": params.edge_smoothing,
                "blur_weight": params.blur_weight,
                "blur_smoothing": params.blur_smoothing,
                "noise_samples": params.noise_samples,
                "blur_shape": list(params.blur_shape)}
    raise ConfigError(f"unknown stripe kind {kind!r}")


def _params_from_record(kind: str, record: dict):
    if kind == "uniform":
        return None
    if kind == "curve":
        return CurveParams(**record)
    if kind == "cracked":
        return CrackedParams(**record)
    if kind == "diamond":
        return DiamondParams(**record)
    if kind == "complex":
        record = dict(record)
        record["blur_shape"] = tuple(record["blur_shape"])
        return ComplexParams(**record)
    raise ConfigError(f"unknown stripe kind {kind!r}")


def _layer_record(layer: StripeLayerSpec) -> dict:
    return {"kind": layer.kind, "role": layer.role,
            "band": _band_record(layer.band),
            "kinematics": _kinematics_record(layer.kinematics),
            "params": _params_record(layer.kind, layer.params)}


def _layer_from_record(record: dict) -> StripeLayerSpec:
    try:
        return StripeLayerSpec(
            kind=record["kind"], role=record["role"],
            band=StripeBand(**record["band"]),
            kinematics=LayerKinematics(**record["kinematics"]),
            params=_params_from_record(record["kind"], record["params"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed layer record: {exc}") from exc


def clip_manifest(spec: DegradationSpec, width: int, height: int,
                  tool_version: str, frame_hashes: list[str]) -> dict:
    """Full record of one rendered clip, sufficient to re-render it."""
    record = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "tool_version": tool_version,
        "frame": {"width": width, "height": height},
        "clip": {"seed": spec.seed, "frame_count": spec.frame_count,
                 "intensity": spec.intensity},
        "base": _layer_record(spec.base),
    }
    record["thick"] = _layer_record(spec.thick) if spec.thick is not None else None
    record["input_hashes"] = list(frame_hashes)
    return record


def spec_from_manifest(record: dict) -> tuple[DegradationSpec, int, int]:
    """Rebuild (spec, width, height) from a parsed manifest record."""
    if record.get("format") != FORMAT_NAME:
        raise ConfigError(f"not a {FORMAT_NAME} record: format={record.get('format')!r}")
    if record.get("version") != FORMAT_VERSION:
        raise ConfigError(f"unsupported manifest version {record.get('version')!r}")
    try:
        clip = record["clip"]
        frame = record["frame"]
        thick = record["thick"]
        spec = DegradationSpec(
            base=_layer_from_record(record["base"]),
            thick=_layer_from_record(thick) if thick is not None else None,
            intensity=float(clip["intensity"]),
            seed=int(clip["seed"]),
            frame_count=int(clip["frame_count"]))
        return spec, int(frame["width"]), int(frame["height"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed manifest: {exc}") from exc


def dump_manifest(record: dict) -> str:
    return dump_kv(record) + "\n"


def parse_manifest(text: str) -> dict:
    return parse_kv(text)

"""Counter-based random streams addressed by hierarchical key paths.

Every stochastic draw in a rendered clip is pulled from a stream keyed by
where the value lives (seed, clip, layer, stripe, field tag) rather than by
when it is drawn.  Two consequences the rest of the package relies on:

* rendering order is irrelevant -- stripe 7's noise is identical whether it
  is touched first, last, or from eight worker threads;
* re-rendering from a manifest reproduces every draw bit for bit.

Streams are numpy Philox generators whose 128-bit key is a SHA-256 digest of
the canonically encoded path, so keys never collide by accident and do not
depend on numpy's seed-spreading internals.
"""

from __future__ import annotations

import hashlib

import numpy as np

PathPart = int | str


def _encode(parts: tuple[PathPart, ...]) -> bytes:
    chunks = []
    for part in parts:
        if isinstance(part, bool) or not isinstance(part, (int, str)):
            raise TypeError(f"rng path parts must be int or str, got {part!r}")
        if isinstance(part, int):
            raw = part.to_bytes(16, "little", signed=True)
            chunks.append(b"i" + raw)
        else:
            raw = part.encode("utf-8")
            chunks.append(b"s" + len(raw).to_bytes(4, "little") + raw)
    return b"|".join(chunks)


def derive_key(*parts: PathPart) -> int:
    """128-bit Philox key for a key path. Stable across runs and platforms."""
    digest = hashlib.sha256(_encode(parts)).digest()
    return int.from_bytes(digest[:16], "little")


def derive_rng(*parts: PathPart) -> np.random.Generator:
    """Fresh generator for a key path; equal paths yield equal streams."""
    return np.random.Generator(np.random.Philox(key=derive_key(*parts)))


class KeyPath:
    """A position in the key hierarchy; child() extends it without copying
    the ancestors' entropy anywhere."""

    __slots__ = ("parts",)

    def __init__(self, *parts: PathPart):
        self.parts = parts

    def child(self, *more: PathPart) -> "KeyPath":
        return KeyPath(*self.parts, *more)

    def rng(self) -> np.random.Generator:
        return derive_rng(*self.parts)

    def __repr__(self) -> str:
        return "KeyPath" + repr(self.parts)

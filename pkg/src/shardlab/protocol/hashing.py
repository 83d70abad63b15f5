"""Digest plumbing: a real sha256 path and an injectable oracle for tests.

Every hash input is built from typed parts (ints, bytes, strings) joined
with explicit length prefixes, so concatenation ambiguity cannot occur.
"""
from __future__ import annotations

import hashlib

__all__ = ["encode_parts", "digest", "Sha256Oracle", "InjectedOracle", "HASH_SPACE"]

HASH_SPACE = 1 << 256  # oracle outputs live in [0, HASH_SPACE)


def encode_parts(*parts) -> bytes:
    buf = bytearray()
    for part in parts:
        if isinstance(part, bool):
            raise TypeError("bools are ambiguous parts; pass an int explicitly")
        if isinstance(part, int):
            tag = b"i"
            raw = part.to_bytes((part.bit_length() + 7) // 8 or 1, "big", signed=False)
        elif isinstance(part, str):
            tag = b"s"
            raw = part.encode("utf-8")
        elif isinstance(part, (bytes, bytearray)):
            tag = b"b"
            raw = bytes(part)
        else:
            raise TypeError(f"unhashable part type {type(part).__name__}")
        buf += tag
        buf += len(raw).to_bytes(4, "big")
        buf += raw
    return bytes(buf)


def digest(*parts) -> bytes:
    """256-bit digest of the typed parts."""
    return hashlib.sha256(encode_parts(*parts)).digest()


class Sha256Oracle:
    """Default hash oracle: uniform-looking integers from sha256."""

    def value(self, *parts) -> int:
        return int.from_bytes(digest(*parts), "big")


class InjectedOracle:
    """Deterministic test oracle returning preloaded values.

    Keys are the part tuples exactly as passed to ``value``. Unknown keys
    fall back to sha256 unless ``strict`` is set.
    """

    def __init__(self, values: dict, strict: bool = False):
        self.values = dict(values)
        self.strict = strict
        self._fallback = Sha256Oracle()

    def value(self, *parts) -> int:
        if parts in self.values:
            return int(self.values[parts])
        if self.strict:
            raise KeyError(f"no injected value for {parts!r}")
        return self._fallback.value(*parts)

"""Seeded random streams.

Every stochastic stage draws from its own ``numpy.random.Generator`` backed by
PCG64. Streams are split deterministically::

    child = blake2b(parent.to_bytes(8, "little") + tag.encode() + b"\\0"
                    + index.to_bytes(8, "little"), digest_size=8)

read back as a little-endian unsigned 64-bit integer. The rule is versioned as
``STREAM_VERSION`` and recorded in every run manifest.
"""
from __future__ import annotations

import hashlib

import numpy as np

STREAM_VERSION = "pcg64+blake2b-v1"
_MASK64 = (1 << 64) - 1


def child_seed(parent: int, tag: str, index: int = 0) -> int:
    if not 0 <= parent <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {parent}")
    payload = (
        int(parent).to_bytes(8, "little")
        + tag.encode("utf-8")
        + b"\0"
        + (int(index) & _MASK64).to_bytes(8, "little")
    )
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def stream(parent: int, tag: str, index: int = 0) -> np.random.Generator:
    """Generator for the child stream ``(parent, tag, index)``."""
    return generator(child_seed(parent, tag, index))

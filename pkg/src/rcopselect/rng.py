"""Deterministic random streams keyed by (seed, purpose).

Every stochastic routine in the package draws from a stream derived from a
user seed plus a purpose tag, so independent components never share or race
on generator state and reruns are bit-identical.
"""

from __future__ import annotations

import zlib

import numpy as np


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xFFFFFFFF
    return zlib.crc32(str(tag).encode("utf8"))


def stream(seed: int, *purpose) -> np.random.Generator:
    """Return a generator for the stream identified by seed and purpose tags."""
    entropy = (int(seed),) + tuple(_tag_to_int(t) for t in purpose)
    return np.random.default_rng(np.random.SeedSequence(entropy))

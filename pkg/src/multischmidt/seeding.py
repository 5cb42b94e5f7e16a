"""Deterministic random streams.

All randomized search paths in the package draw from counter-based Philox
generators derived from (seed, tag...) so that results are reproducible
across platforms and independent of evaluation order: a cache hit in one
search never shifts the stream seen by another.
"""
from __future__ import annotations

import hashlib

import numpy as np


def _feed(h, tag) -> None:
    if isinstance(tag, bytes):
        h.update(b"b" + tag)
    elif isinstance(tag, str):
        h.update(b"s" + tag.encode())
    elif isinstance(tag, (int, np.integer)):
        h.update(b"i" + int(tag).to_bytes(16, "little", signed=True))
    elif isinstance(tag, (tuple, list)):
        h.update(b"(")
        for item in tag:
            _feed(h, item)
        h.update(b")")
    else:
        raise TypeError(f"unsupported stream tag type: {type(tag)!r}")
    h.update(b"\x00")


def _tag_words(tags: tuple) -> tuple[int, ...]:
    h = hashlib.blake2b(digest_size=16)
    for t in tags:
        _feed(h, t)
    d = h.digest()
    return tuple(int.from_bytes(d[i : i + 4], "little") for i in range(0, 16, 4))


def stream(seed: int, *tags) -> np.random.Generator:
    """Return a Philox generator keyed by ``seed`` and a tag tuple."""
    ss = np.random.SeedSequence(entropy=int(seed) & ((1 << 64) - 1), spawn_key=_tag_words(tags))
    return np.random.Generator(np.random.Philox(ss))

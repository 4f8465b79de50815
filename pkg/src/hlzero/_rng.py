"""Seed derivation for reproducible, order-independent random streams.

All randomness in the package flows through Philox, a counter-based 64-bit
generator, keyed through ``numpy.random.SeedSequence``.  Independent streams
are derived from a master seed and a path of labels, so that

* the same ``(seed, path)`` always yields the same stream, on any platform;
* streams for different runs of an ensemble are independent and can be
  generated in any order (run 17 does not depend on runs 0..16).

String labels are mixed in as little-endian integer encodings of their UTF-8
bytes; labels must stay short enough to fit a SeedSequence spawn-key word.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_rng", "derive_seed"]


def _encode(label: int | str) -> int:
    if isinstance(label, str):
        data = label.encode("utf-8")
        if len(data) > 12:
            raise ValueError(f"stream label too long: {label!r}")
        return int.from_bytes(data, "little")
    return int(label)


def derive_rng(master_seed: int, *path: int | str) -> np.random.Generator:
    """Return a Philox generator for the stream identified by ``path``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(_encode(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(master_seed: int, *path: int | str) -> int:
    """Return a 64-bit child seed for the stream identified by ``path``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(_encode(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])

"""Deterministic seeded randomness with named substreams.

Every generative step in the pipeline draws from a SeededRng. Substreams are
derived from a (seed, path) pair via numpy's SeedSequence over the PCG64 bit
generator, which produces identical streams on every platform. Because each
consumer derives its own substream by name (and index, for pool candidates),
adding a new consumer never shifts the draws seen by existing ones.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key_to_int(key: int | str) -> int:
    if isinstance(key, int):
        return key & 0xFFFFFFFF
    return zlib.crc32(key.encode("utf-8"))


class SeededRng:
    """A PCG64 generator addressed by a root seed and a derivation path."""

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = path
        ss = np.random.SeedSequence([self.seed & 0xFFFFFFFFFFFFFFFF, *path])
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, *keys: int | str) -> "SeededRng":
        """Derive an independent child stream; same keys, same stream."""
        return SeededRng(self.seed, self.path + tuple(_key_to_int(k) for k in keys))

    def choice_index(self, weights) -> int:
        """Pick an index according to `weights` (need not be normalized)."""
        w = np.asarray(weights, dtype=float)
        return int(self.generator.choice(len(w), p=w / w.sum()))

    def uniform(self) -> float:
        return float(self.generator.random())

    def pick(self, options):
        """Uniform choice from a sequence."""
        return options[int(self.generator.integers(0, len(options)))]

    def int_between(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed interval [lo, hi]."""
        return int(self.generator.integers(lo, hi + 1))

    def __repr__(self) -> str:  # pragma: no cover
        return f"SeededRng(seed={self.seed}, path={self.path})"

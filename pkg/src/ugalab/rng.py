"""Seeded, splittable random streams.

All stochastic code in this package draws from a :class:`RandomStream`, a
thin wrapper around numpy's PCG64 generator seeded through a
``SeedSequence``.  One pinned generator keeps runs reproducible bit-exactly
for a fixed seed, and ``split`` derives statistically independent child
streams (via ``SeedSequence.spawn``) so trials can run in any order without
coupling their draws.
"""

from __future__ import annotations

import numpy as np

__all__ = ["RandomStream"]


class RandomStream:
    """Single-owner random stream. Never share one stream across tasks;
    use :meth:`split` to hand independent streams to parallel work."""

    def __init__(self, seed: int | None = None, _seq: np.random.SeedSequence | None = None):
        self._seq = _seq if _seq is not None else np.random.SeedSequence(seed)
        self.seed = seed
        self.gen = np.random.Generator(np.random.PCG64(self._seq))

    def split(self, n: int) -> list["RandomStream"]:
        """Derive ``n`` independent child streams from this stream's seed
        sequence. Children are deterministic in (seed, spawn order)."""
        return [RandomStream(self.seed, _seq=child) for child in self._seq.spawn(n)]

    # -- draw helpers -------------------------------------------------

    def bits(self, shape) -> np.ndarray:
        """Uniform i.i.d. bits with the given shape, dtype uint8."""
        return self.gen.integers(0, 2, size=shape, dtype=np.uint8)

    def uniform(self, size=None):
        """Uniform reals in [0, 1)."""
        return self.gen.random(size)

    def normal(self, size=None):
        """Standard normal draws (numpy ziggurat transform of uniforms)."""
        return self.gen.standard_normal(size)

    def integers(self, low, high, size=None):
        """Uniform integers in [low, high)."""
        return self.gen.integers(low, high, size=size)

    def shuffle(self, x: np.ndarray) -> None:
        self.gen.shuffle(x)

    def permutation(self, n: int) -> np.ndarray:
        return self.gen.permutation(n)

    def choice(self, n: int, size: int, replace: bool = True) -> np.ndarray:
        return self.gen.choice(n, size=size, replace=replace)

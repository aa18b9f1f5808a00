"""Seeded deterministic random streams.

Every stochastic component of the library draws from an RngStream and
nothing else, so a run is fully determined by its seed. Streams are
splittable: ``substream(i)`` derives an independent child stream whose
output depends only on (seed, spawn path), never on how much the parent
has already drawn. Datasets hand one substream to each item index, which
makes generation order-independent and safe to parallelize.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """Deterministic pseudo-random stream (PCG64 behind a SeedSequence).

    The same (seed, spawn_key) produces the same draw sequence on every
    platform and run.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, spawn_key={self.spawn_key})"

    def substream(self, index: int) -> "RngStream":
        """Independent child stream; does not advance this stream."""
        return RngStream(self.seed, self.spawn_key + (int(index),))

    # -- draw primitives -------------------------------------------------

    def random(self) -> float:
        """Uniform real on [0, 1)."""
        return float(self._gen.random())

    def uniform(self, lo: float = 0.0, hi: float = 1.0, size=None):
        """Uniform real(s) on [lo, hi)."""
        out = self._gen.uniform(lo, hi, size)
        return float(out) if size is None else out

    def normal(self, mu: float = 0.0, sigma: float = 1.0, size=None):
        """Normal draw(s); sigma = 0 yields exactly mu."""
        out = self._gen.normal(mu, sigma, size)
        return float(out) if size is None else out

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer on the closed range [lo, hi]."""
        return int(self._gen.integers(lo, hi + 1))

    def integers(self, lo: int, hi: int, size) -> np.ndarray:
        """Array of uniform integers on [lo, hi]."""
        return self._gen.integers(lo, hi + 1, size=size)

    def bernoulli(self, p: float) -> bool:
        """True with probability p (one uniform draw)."""
        return bool(self._gen.random() < p)

    def choice_distinct(self, n: int, k: int) -> np.ndarray:
        """k distinct integers from range(n), in draw order."""
        return self._gen.choice(n, size=k, replace=False)

    def permutation(self, n: int) -> np.ndarray:
        """Shuffled range(n)."""
        return self._gen.permutation(n)

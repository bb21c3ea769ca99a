"""Deterministic randomness for reproducible experiments.

Every randomized operation in this package draws from SplitMix64 (the
finalizer of java.util.SplittableRandom), seeded with an explicit 64-bit
integer.  The generator and the two derived draw procedures below are
small enough to re-implement from the description in FORMATS.md, so a
(seed, draw order) pair pins down every artifact byte for byte.

Draw procedures:

* ``below(m)``: uniform integer in [0, m) by rejection from the top of
  the 64-bit range (never biased, never rejects when m is a power of 2).
* ``sample(u, k)``: uniform k-element subset of range(u) via a sparse
  partial Fisher-Yates pass; returned sorted.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit-state PRNG with a fully documented update rule."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        if bound > 1 << 64:
            raise ValueError("bound exceeds the 64-bit draw range")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def sample(self, universe: int, k: int) -> list[int]:
        """Uniform k-subset of range(universe), sorted ascending.

        Partial Fisher-Yates over an implicit identity array; only the
        touched slots are materialized, so cost is O(k) regardless of
        universe size.
        """
        if not 0 <= k <= universe:
            raise ValueError(f"cannot sample {k} items from {universe}")
        swapped: dict[int, int] = {}
        picked = []
        for i in range(k):
            j = i + self.below(universe - i)
            picked.append(swapped.get(j, j))
            swapped[j] = swapped.get(i, i)
        picked.sort()
        return picked

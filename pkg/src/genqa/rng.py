"""Portable deterministic randomness.

Every random choice in the toolchain (sentence order, template picks,
unanswerable sampling, splits) flows through SplitMix64 seeded from
content-stable identifiers, never from Python's hash() or the global
``random`` module.  Outputs are therefore identical across platforms,
interpreter runs, and worker counts.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# FNV-1a 64-bit parameters, used to fold strings into seeds.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    """One SplitMix64 output step for a 64-bit state value."""
    z = (z + _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def fold_string(seed: int, text: str) -> int:
    """Fold a string into a 64-bit seed with FNV-1a, then scramble."""
    h = _FNV_OFFSET
    for b in text.encode("utf-8"):
        h = ((h ^ b) * _FNV_PRIME) & MASK64
    return mix64((seed ^ h) & MASK64)


def derive_seed(global_seed: int, *parts: str) -> int:
    """Derive a stable per-unit seed from the run seed and string ids.

    The separator byte between parts prevents ("ab","c") and ("a","bc")
    from colliding.
    """
    state = mix64(global_seed & MASK64)
    for part in parts:
        state = fold_string(state, part)
        state = fold_string(state, "\x1f")
    return state


class SplitMix64:
    """Tiny counter-based PRNG; adequate for shuffles and sampling."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection of the biased tail."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        limit = MASK64 - (MASK64 % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, total: int, k: int) -> list[int]:
        """k distinct indices from range(total), in ascending order."""
        if k > total:
            raise ValueError("sample larger than population")
        if k == 0:
            return []
        # Partial Fisher-Yates over an index list; fine at our sizes.
        idx = list(range(total))
        for i in range(k):
            j = i + self.below(total - i)
            idx[i], idx[j] = idx[j], idx[i]
        return sorted(idx[:k])

    def choice(self, items: list):
        return items[self.below(len(items))]

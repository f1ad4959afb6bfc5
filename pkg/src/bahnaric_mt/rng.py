"""Seeded pseudorandom streams that are stable across machines and runs.

Every randomized operation in the toolkit draws from a SplitMix64 stream
keyed by the operation's identity (seed, pair id, task name, ...), so
results do not depend on iteration order or worker count.
"""

from __future__ import annotations

import hashlib
from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


class SplitMix64:
    """Minimal splitmix64 generator with the handful of draws we need."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        limit = (_MASK64 + 1) - ((_MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def uniform_open(self) -> float:
        """Uniform float strictly inside (0, 1)."""
        return (self.next_u64() + 1) / (2**64 + 1)

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k distinct items, uniform without replacement (partial Fisher-Yates)."""
        if k > len(items):
            raise ValueError("sample size larger than population")
        pool = list(items)
        for i in range(k):
            j = i + self.randrange(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_stream(seed: int, *key_parts: str) -> SplitMix64:
    """Stream keyed by (seed, *key_parts); stable across platforms."""
    material = str(seed) + "\x1f" + "\x1f".join(key_parts)
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return SplitMix64(int.from_bytes(digest[:8], "big"))

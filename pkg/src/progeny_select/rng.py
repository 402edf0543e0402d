"""SplitMix64: a tiny, fully specified generator so corpora reproduce in any language.

Streams are defined bit-for-bit:

* ``next_u64``: the standard SplitMix64 step (Steele, Lea & Flood 2014).
* ``random``: top 53 bits of ``next_u64`` divided by 2**53.
* ``below(b)``: rejection sampling on ``next_u64`` against the largest multiple
  of ``b`` not exceeding 2**64, then ``% b``.
* ``shuffle``: Fisher-Yates from the last index down, swapping ``i`` with
  ``below(i + 1)``.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def shuffle(self, items: MutableSequence) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

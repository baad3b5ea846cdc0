"""Reproducible clause-order shuffling driven by SplitMix64.

Generator: the 64-bit state advances by 0x9E3779B97F4A7C15 per draw and the
output is mixed with the usual SplitMix64 constants (shift 30, multiply
0xBF58476D1CE4E5B9, shift 27, multiply 0x94D049BB133111EB, shift 31).

Stream for round r under seed s: initial state ``s XOR (r * 0x9E3779B97F4A7C15)``
(mod 2**64). Permutation: Fisher-Yates from the last position down, index
drawn as ``next() % (k + 1)``.
"""

from typing import List, Optional, Sequence, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    """The SplitMix64 generator over a 64-bit state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def round_stream(seed: int, round_number: int) -> SplitMix64:
    return SplitMix64((seed ^ (round_number * GOLDEN_GAMMA)) & MASK64)


def shuffle_order(items: Sequence[T], seed: Optional[int], round_number: int = 0) -> List[T]:
    """Permutation of ``items`` for the given seed and round; identity without a seed."""
    order = list(items)
    if seed is None:
        return order
    rng = round_stream(seed, round_number)
    for k in range(len(order) - 1, 0, -1):
        j = rng.next() % (k + 1)
        order[k], order[j] = order[j], order[k]
    return order

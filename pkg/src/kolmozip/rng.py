"""Deterministic 64-bit linear congruential generator.

Everything in this package that needs randomness (weight init, synthetic
sources, corpus generators) draws from this one PRNG so that identical
seeds give identical artifacts on every platform.  Constants are the
MMIX multiplier/increment (Knuth, TAOCP vol. 2).
"""

from __future__ import annotations

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


def mix64(*values: int) -> int:
    """Fold integers into one 64-bit state; used to split independent streams."""
    h = 0x9E3779B97F4A7C15
    for v in values:
        h = ((h ^ (v & _MASK64)) * MULTIPLIER + INCREMENT) & _MASK64
        h ^= h >> 29
    return h


class Lcg64:
    """x_{n+1} = (a*x_n + c) mod 2^64, emitting the full state each step."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        # one warm-up step decorrelates small seeds (0, 1, 2, ...)
        self.state = ((seed & _MASK64) * MULTIPLIER + INCREMENT) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state * MULTIPLIER + INCREMENT) & _MASK64
        return self.state

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n); bias is < n/2^64.

        Multiply-shift rather than modulo: an LCG's low bits have short
        periods, so n must map to the high bits of the state.
        """
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

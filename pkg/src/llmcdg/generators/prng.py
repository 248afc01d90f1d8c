"""xorshift64* pseudo-random generator.

State update (all arithmetic modulo 2**64)::

    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    out = x * 0x2545F4914F6CDD1D

The state is seeded through one splitmix64 step so that small or zero seeds
still give a well-mixed, non-zero state. Draws of ``w`` bits take the top
``w`` bits of ``out``. The sequence depends only on the seed, on every
platform.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int = 0):
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK64

    def bits(self, width: int) -> int:
        """Uniform integer in ``[0, 2**width)`` for ``0 <= width <= 64``."""
        if width == 0:
            return 0
        return self.next_u64() >> (64 - width)

    def fork(self, salt: int) -> "XorShift64Star":
        return XorShift64Star(self.next_u64() ^ splitmix64(salt))

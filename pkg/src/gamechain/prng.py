"""SplitMix64: the deterministic PRNG behind block timing and scripted agents.

Chosen because the whole generator is one 64-bit word of state, so seeding a
substream per agent (seed XOR agent index) is cheap and order-independent.
Python ints are unbounded; every step masks back to 64 bits.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-enough draw in [0, bound). Modulo bias is irrelevant for
        bounds this far below 2**64."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next() % bound

    def between(self, lo: int, hi: int) -> int:
        """Draw in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.below(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den."""
        return self.below(den) < num


def substream(seed: int, index: int) -> SplitMix64:
    """Independent per-agent stream: same seed, distinct index."""
    return SplitMix64((seed ^ index) & _MASK)

"""Deterministic 64-bit PRNG (SplitMix64) plus substream derivation.

Every sampler in this package draws from SplitMix64 rather than
``random.Random`` so that results are reproducible bit-for-bit across
platforms and Python versions: the whole state is one 64-bit word and the
output function is a fixed xor-shift-multiply scramble with no float or
platform-dependent step anywhere.

Substreams: trial i of a run seeded with ``master`` uses
``Rng(substream(master, i))``.  Substream seeds are produced by pushing the
master seed i+1 steps along the Weyl sequence and scrambling, which is the
same recipe SplitMix64 itself uses to split, so distinct trials get
decorrelated streams and a run can be reproduced (or parallelized) per
trial.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, the Weyl increment


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective scramble of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream(master: int, index: int) -> int:
    """Seed for the index-th independent substream of ``master``."""
    if index < 0:
        raise ValueError("substream index must be >= 0")
    return mix64((master + (index + 1) * _GAMMA) & MASK64)


class Rng:
    """SplitMix64 stream: state += gamma, output = mix64(state)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next64(self) -> int:
        """Next raw 64-bit output."""
        self._state = s = (self._state + _GAMMA) & MASK64
        return mix64(s)

    def below(self, k: int) -> int:
        """Uniform integer in [0, k), exact (rejection, no modulo bias)."""
        if k <= 0:
            raise ValueError("below() needs k >= 1")
        lim = ((1 << 64) // k) * k
        while True:
            u = self.next64()
            if u < lim:
                return u % k

    def block_below(self, k: int, count: int) -> list[int]:
        """``count`` uniform draws in [0, k) as a list (hot-loop helper)."""
        if k <= 0:
            raise ValueError("block_below() needs k >= 1")
        lim = ((1 << 64) // k) * k
        out = []
        append = out.append
        state = self._state
        mask = MASK64
        while len(out) < count:
            state = (state + _GAMMA) & mask
            z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & mask
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
            z ^= z >> 31
            if z < lim:
                append(z % k)
        self._state = state
        return out

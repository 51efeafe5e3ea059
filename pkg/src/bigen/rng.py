"""Seeding and raw random-stream plumbing shared by both kernel backends.

Every generator in this package consumes randomness as a sequence of raw
64-bit words from a numpy PCG64 bit generator, mapped to bounded integers
and unit floats by the two functions below.  The compiled kernels implement
the exact same mappings in C, so a given seed produces the same structure
on either backend, draw for draw.
"""

from __future__ import annotations

import numpy as np

# Unit floats use the conventional 53-bit mantissa construction.
_UNIT_SCALE = 1.0 / (1 << 53)

_BUFFER_SIZE = 4096


class Uint64Stream:
    """Buffered raw 64-bit draws from a numpy bit generator.

    The wrapped bit generator must not be shared with other consumers:
    buffering advances its state ahead of the values handed out.
    """

    __slots__ = ("bit_generator", "_buf", "_pos")

    def __init__(self, bit_generator: np.random.BitGenerator) -> None:
        self.bit_generator = bit_generator
        self._buf: list[int] = []
        self._pos = 0

    @classmethod
    def from_seed(cls, seed: int) -> "Uint64Stream":
        return cls(np.random.PCG64(seed))

    def next64(self) -> int:
        """Next raw 64-bit word."""
        if self._pos >= len(self._buf):
            self._buf = self.bit_generator.random_raw(_BUFFER_SIZE).tolist()
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return value

    def bounded(self, n: int) -> int:
        """Uniform integer in [0, n) by masked rejection.

        Consumes no draw when n <= 1; otherwise one draw per rejection round.
        This is the contract mirrored by the compiled kernels.
        """
        if n <= 1:
            return 0
        mask = (1 << (n - 1).bit_length()) - 1
        while True:
            value = self.next64() & mask
            if value < n:
                return value

    def unit(self) -> float:
        """Uniform float in [0, 1) with 53 random mantissa bits."""
        return (self.next64() >> 11) * _UNIT_SCALE


def derive_seed(*path: int) -> int:
    """Collapse an integer path (base seed, stage/run indices) into a seed.

    Uses numpy's SeedSequence over the length-prefixed component list (the
    prefix keeps paths with trailing zeros distinct), so distinct paths give
    statistically independent streams and any run can be reproduced in
    isolation from its derived seed alone.
    """
    if not path:
        raise ValueError("derive_seed needs at least one component")
    if any(component < 0 for component in path):
        raise ValueError("seed path components must be non-negative")
    entropy = [len(path), *path]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])

"""Reproducible PRNG for sampling: splitmix64-seeded xoshiro256**.

The sampling contract is language-independent and fixed for good:

* ``splitmix64``: state advances by the golden gamma 0x9E3779B97F4A7C15; each
  output z is mixed by ``z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27;
  z *= 0x94D049BB133111EB; z ^= z>>31`` (all mod 2**64).
* ``xoshiro256**``: the four state words are the first four outputs of a
  splitmix64 stream started at the seed.  Output is
  ``rotl(s1 * 5, 7) * 9``; the state update is ``t = s1 << 17; s2 ^= s0;
  s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)``.
* Draw k of the stream decides face k: the face is present iff
  ``draw_k < floor(p * 2**64)`` (p = 1 means always present).  Because draw k
  is fixed by the seed alone, complexes sampled with the same seed are
  monotone coupled across p.

A plain-Python generator is kept alongside the numba kernel so the two can
be cross-checked; both produce bit-identical streams.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK64 = (1 << 64) - 1
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """First output of a splitmix64 stream seeded at x (used for trial seeds)."""
    z = (x + SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Streaming splitmix64, one 64-bit output per next()."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next(self) -> int:
        self._state = (self._state + SPLITMIX_GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)


class Xoshiro256StarStar:
    """Reference implementation; the numba kernel must match it bit for bit."""

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self._s = [sm.next() for _ in range(4)]

    @staticmethod
    def _rotl(x: int, k: int) -> int:
        return ((x << k) | (x >> (64 - k))) & _MASK64

    def next(self) -> int:
        s = self._s
        result = (self._rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rotl(s[3], 45)
        return result


@njit(cache=True, nogil=True)
def _xoshiro_bits_kernel(seed, count, threshold, out):  # pragma: no cover - jitted
    gamma = np.uint64(0x9E3779B97F4A7C15)
    mix1 = np.uint64(0xBF58476D1CE4E5B9)
    mix2 = np.uint64(0x94D049BB133111EB)
    state = np.uint64(seed)
    s = np.empty(4, dtype=np.uint64)
    for i in range(4):
        state = state + gamma
        z = state
        z = (z ^ (z >> np.uint64(30))) * mix1
        z = (z ^ (z >> np.uint64(27))) * mix2
        s[i] = z ^ (z >> np.uint64(31))
    s0, s1, s2, s3 = s[0], s[1], s[2], s[3]
    five = np.uint64(5)
    nine = np.uint64(9)
    for k in range(count):
        x = s1 * five
        result = ((x << np.uint64(7)) | (x >> np.uint64(57))) * nine
        t = s1 << np.uint64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        out[k] = result < threshold


def presence_threshold(p: float) -> int:
    """floor(p * 2**64); exact because scaling by a power of two is exact."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability p={p} outside [0, 1]")
    return int(np.floor(p * 2.0**64))


def face_bits(seed: int, count: int, p: float) -> np.ndarray:
    """Boolean presence vector: bit k set iff draw k < floor(p * 2**64)."""
    t = presence_threshold(p)
    out = np.empty(count, dtype=np.bool_)
    if t >= 1 << 64:
        out[:] = True
        return out
    if t == 0:
        out[:] = False
        return out
    _xoshiro_bits_kernel(np.uint64(seed & _MASK64), count, np.uint64(t), out)
    return out


def face_bits_reference(seed: int, count: int, p: float) -> np.ndarray:
    """Pure-Python twin of face_bits, for cross-checking the kernel."""
    t = presence_threshold(p)
    gen = Xoshiro256StarStar(seed)
    return np.array([gen.next() < t for _ in range(count)], dtype=np.bool_)


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Per-trial seed derivation: splitmix64(master_seed + trial_index) mod 2**64."""
    return splitmix64((master_seed + trial_index) & _MASK64)

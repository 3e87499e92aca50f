"""Counter-based random numbers keyed by (seed, stream, unit, counter).

Every draw is a pure function of its key, so results do not depend on how
units are chunked or in which order they are processed.

Algorithm (all arithmetic modulo 2**64)::

    mix(z)      = SplitMix64 finalizer:
                  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
                  z ^= z >> 27; z *= 0x94D049BB133111EB
                  z ^= z >> 31
    stream_key  = mix(seed + GAMMA * (stream + 1))
    unit_key    = mix(stream_key + GAMMA * (unit + 1))
    bits        = mix(unit_key + GAMMA * (counter + 1))

with GAMMA = 0x9E3779B97F4A7C15.  For a fixed unit the sequence over
``counter`` is exactly a SplitMix64 stream started from ``unit_key``.
Uniforms in (0, 1) are ``((bits >> 11) + 0.5) * 2**-53``.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_GAMMA = np.uint64(GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_ONE = np.uint64(1)


class Stream(IntEnum):
    """Named purposes; each gets an independent family of substreams."""

    CATALOG = 1
    EFFECTS = 2
    CLAIM_EFFECTS = 3
    USER_KIND = 10
    USER_START = 11
    USER_CHURN = 12
    CADENCE = 13
    BASKET = 14
    WET_SHARE = 15
    ONSET = 16
    ONSET_DAY = 17
    SWITCH = 18
    LAG = 19
    QUANTITY = 20
    TARGET_PICK = 21
    INSURED_BASKET = 30
    INSURED_WET = 31
    INSURED_ONSET = 32
    INSURED_CLAIM = 33
    INSURED_ONSET_ALT = 34


def mix64_int(z: int) -> int:
    """Scalar reference implementation of the SplitMix64 finalizer."""
    z &= MASK
    z = ((z ^ (z >> 30)) * MIX1) & MASK
    z = ((z ^ (z >> 27)) * MIX2) & MASK
    return z ^ (z >> 31)


def bits_int(seed: int, stream: int, unit: int, counter: int) -> int:
    """Scalar reference for :func:`CounterRNG.bits`."""
    stream_key = mix64_int(seed + GAMMA * (stream + 1))
    unit_key = mix64_int(stream_key + GAMMA * (unit + 1))
    return mix64_int(unit_key + GAMMA * (counter + 1))


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.array(z, dtype=np.uint64, ndmin=1)
    z ^= z >> _U30
    z *= _MIX1
    z ^= z >> _U27
    z *= _MIX2
    z ^= z >> _U31
    return z


class CounterRNG:
    def __init__(self, seed: int):
        self.seed = int(seed) & MASK

    def _stream_key(self, stream: int) -> np.uint64:
        return np.uint64(mix64_int(self.seed + GAMMA * (int(stream) + 1)))

    def bits(self, stream: int, units, counters) -> np.ndarray:
        """64-bit draws; ``units`` and ``counters`` broadcast against each other."""
        u = np.array(units, dtype=np.uint64, ndmin=1)
        c = np.array(counters, dtype=np.uint64, ndmin=1)
        with np.errstate(over="ignore"):
            unit_key = mix64(self._stream_key(stream) + _GAMMA * (u + _ONE))
            out = mix64(unit_key + _GAMMA * (c + _ONE))
        return out.reshape(np.broadcast_shapes(np.shape(units), np.shape(counters)))

    def uniform(self, stream: int, units, counters) -> np.ndarray:
        b = self.bits(stream, units, counters)
        return ((b >> _U11).astype(np.float64) + 0.5) * (2.0**-53)

    def integers(self, stream: int, units, counters, high) -> np.ndarray:
        """Integers in [0, high) by scaling a uniform (bias below 2**-40 for small ``high``)."""
        u = self.uniform(stream, units, counters)
        return np.minimum((u * np.asarray(high)).astype(np.int64), np.asarray(high) - 1)

    def normal(self, stream: int, units, counters) -> np.ndarray:
        """Standard normals by Box-Muller; uses counters 2k and 2k + 1 for draw k."""
        c = np.array(counters, dtype=np.uint64, ndmin=1) * np.uint64(2)
        u1 = self.uniform(stream, units, c)
        u2 = self.uniform(stream, units, c + _ONE)
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)

    def exponential(self, stream: int, units, counters, mean: float) -> np.ndarray:
        return -mean * np.log(self.uniform(stream, units, counters))

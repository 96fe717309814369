"""Counter-based random numbers.

Every draw is a pure function of (seed, stream label, counter):

    key   = splitmix64(seed XOR fnv1a64(label))
    word  = splitmix64(key + counter * 0x9E3779B97F4A7C15)
    u     = (word >> 11) * 2**-53          # uniform on [0, 1)

``splitmix64(z)`` is the usual finaliser: z += 0x9E3779B97F4A7C15, then
z = (z ^ z>>30) * 0xBF58476D1CE4E5B9, z = (z ^ z>>27) * 0x94D049BB133111EB,
return z ^ z>>31, all modulo 2**64.  Reimplementing these three lines in
any language reproduces every instance stream from the same seed.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def _splitmix64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = z + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def fnv1a64(label: str) -> int:
    h = 0xCBF29CE484222325
    for b in label.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def stream_key(seed: int, label: str) -> int:
    z = np.array([(seed ^ fnv1a64(label)) & _MASK], dtype=np.uint64)
    return int(_splitmix64(z)[0])


def uniform_at(seed: int, label: str, counters) -> np.ndarray:
    """Uniform [0,1) draws at the given integer counters of one stream."""
    key = np.uint64(stream_key(seed, label))
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        words = _splitmix64(key + c * _GOLDEN)
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53


class CounterRNG:
    """Sequential view of one (seed, label) stream."""

    def __init__(self, seed: int, label: str = ""):
        self.seed = int(seed)
        self.label = label
        self.counter = 0

    def uniform(self, n: int | tuple = 1) -> np.ndarray:
        shape = (n,) if isinstance(n, int) else tuple(n)
        size = int(np.prod(shape))
        out = uniform_at(self.seed, self.label, np.arange(self.counter, self.counter + size))
        self.counter += size
        return out.reshape(shape)

    def integers(self, lo: int, hi: int, n: int | tuple = 1) -> np.ndarray:
        """Integers in [lo, hi)."""
        return lo + np.floor(self.uniform(n) * (hi - lo)).astype(np.int64)

    def unit_disc(self, n: int | tuple = 1) -> np.ndarray:
        shape = (n,) if isinstance(n, int) else tuple(n)
        r = np.sqrt(self.uniform(shape))
        theta = self.uniform(shape)
        return r * np.exp(2j * np.pi * theta)

    def unit_circle(self, n: int | tuple = 1) -> np.ndarray:
        return np.exp(2j * np.pi * self.uniform(n))

    def normal_complex(self, n: int | tuple = 1) -> np.ndarray:
        shape = (n,) if isinstance(n, int) else tuple(n)
        u1 = 1.0 - self.uniform(shape)
        u2 = self.uniform(shape)
        return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)

    def choice(self, seq, k: int) -> list:
        """k distinct elements of seq, order of first appearance in a shuffle."""
        items = list(seq)
        keys = self.uniform(len(items))
        order = np.argsort(keys, kind="stable")
        return [items[i] for i in order[:k]]

"""Deterministic random generator used for every question stream.

The generator is SplitMix64 (Steele, Lea & Flood's 64-bit mixer), chosen
because the whole algorithm fits in a dozen lines of unsigned 64-bit
arithmetic: any implementation, in any language, that follows the constants
below reproduces the exact same question sequences from a seed.

    state' = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state'
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output = z ^ (z >> 31)

Bounded draws use plain modulo reduction; for the spans in this project
(at most 9 x 10^6 against a 2^64 output space) the bias is below 1e-12 and
the arithmetic stays trivially portable.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit avalanche mix."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _fnv1a(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive_seed(base: int, *parts: int | str) -> int:
    """Derive an independent stream seed from a base seed and labels.

    Strings are absorbed through FNV-1a 64; every component is folded in
    with ``h = mix64(h ^ mix64(component))`` so distinct label sequences
    land in unrelated streams.
    """
    h = mix64(base & _MASK64)
    for part in parts:
        v = _fnv1a(part) if isinstance(part, str) else (part & _MASK64)
        h = mix64(h ^ mix64(v))
    return h


class SplitMix64:
    """Mutable generator owned by the caller; ``state`` is plain data and
    can be saved/restored to replay a stream from any point."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return mix64(self.state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice_weighted(self, weights: list[float]) -> int:
        """Index drawn with the given (not necessarily normalized) weights."""
        total = sum(weights)
        u = self.uniform() * total
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if u < acc:
                return i
        return len(weights) - 1

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, high index downward."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

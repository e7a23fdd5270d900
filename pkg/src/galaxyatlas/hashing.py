"""Bit-exact coordinate hashing and the seeded value stream.

Everything downstream of a world seed flows through these three functions.
They are pure, total, and produce identical bits on every platform; the
pinned vectors in ``data/mix64_vectors.tsv`` guard against regressions.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MUL1 = 0xBF58476D1EE2512D
_MUL2 = 0x94D049BB133111EB


def mix64(state: int) -> int:
    """One splitmix64 step: map a 64-bit state to a well-mixed 64-bit value."""
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def hash_coordinate(x: int, y: int, world_seed: int) -> int:
    """Derive the frozen seed for integer coordinates ``(x, y)``.

    The two signed 32-bit coordinates are zero-extended and packed into one
    64-bit word (x high, y low), xored with the world seed, then mixed.
    """
    packed = ((x & 0xFFFFFFFF) << 32) | (y & 0xFFFFFFFF)
    return mix64((world_seed & MASK64) ^ packed)


def unit_float(seed: int, stream_index: int) -> float:
    """Deterministic draw in [0, 1) for stream ``stream_index`` of ``seed``.

    Uses the top 53 bits of a mixed value so the float construction is exact
    on any IEEE-754 platform.
    """
    mixed = mix64((seed + stream_index * GOLDEN_GAMMA) & MASK64)
    return (mixed >> 11) / 9007199254740992.0  # 2**53

"""Deterministic pseudo-random streams shared by all stochastic modules.

The generator is splitmix64 run in counter mode: output ``k`` of the stream
seeded with ``s`` is ``finalize(s + (k+1) * GOLDEN) mod 2**64`` where
``finalize`` is the standard splitmix64 xor-multiply chain and GOLDEN is
0x9E3779B97F4A7C15. This is bit-identical across platforms and builds, can
be evaluated at any offset without stepping through the stream, and splits
into independent substreams by reseeding through :func:`derive`.

Uniform floats are ``(u64 >> 11) * 2**-53`` in [0, 1). Bounded integers use
``u64 % bound``; the modulo bias is at most ``bound / 2**64`` and is
irrelevant for the bounds used here (< 2**32).
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _finalize_scalar(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * _MIX1) & _MASK
    z ^= z >> 27
    z = (z * _MIX2) & _MASK
    z ^= z >> 31
    return z


def derive(seed: int, *tags: int) -> int:
    """Derive an independent substream seed from ``seed`` and integer tags.

    Folding each tag through the splitmix64 finalizer gives statistically
    independent streams for e.g. (seed, step, purpose) triples.
    """
    state = seed & _MASK
    for tag in tags:
        state = _finalize_scalar((state + _GOLDEN + (tag & _MASK)) & _MASK)
    return state


def u64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the stream as uint64."""
    if count < 0:
        raise ValueError("count must be >= 0")
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + idx * np.uint64(_GOLDEN)
        z ^= z >> np.uint64(30)
        z *= np.uint64(_MIX1)
        z ^= z >> np.uint64(27)
        z *= np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
    return z


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """float64 uniforms in [0, 1), 53-bit resolution."""
    return (u64_block(seed, start, count) >> np.uint64(11)) * (2.0 ** -53)


def randint_block(seed: int, start: int, count: int, bound: int) -> np.ndarray:
    """int64 integers uniform on [0, bound)."""
    if bound <= 0:
        raise ValueError("bound must be > 0")
    return (u64_block(seed, start, count) % np.uint64(bound)).astype(np.int64)


def normal_block(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws via Box-Muller on stream uniforms.

    Consumes outputs ``2*start .. 2*(start+count)-1`` of the underlying
    stream, so blocks indexed by ``start`` never overlap.
    """
    u1 = uniform_block(seed, 2 * start, count)
    u2 = uniform_block(seed, 2 * start + count, count)
    # Guard log(0): the stream never emits exactly 1.0, but may emit 0.0.
    u1 = np.where(u1 > 0.0, u1, 2.0 ** -53)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)

"""Deterministic stream derivation for every random draw in this package.

All sampling goes through Philox4x64, a counter-based generator whose output
is a pure function of its 64-bit key.  Keys are derived with ``mix64``, a
splitmix64-style hash over nonnegative integer parts, so any (seed, purpose,
index) tuple maps to its own independent stream.  Two consequences:

* identical keys give bit-identical samples, in any process, in any order,
  which is what makes parallel sweeps byte-reproducible;
* distinct key tuples give statistically independent streams without any
  shared state to synchronise.

The exact algorithms are pinned by the numpy dependency: Philox4x64 for the
bit stream, numpy's ziggurat for Gaussians, and Lemire rejection for bounded
integers.  Changing numpy major versions may change sampled values; the
package pins ``numpy>=1.26`` for that reason.
"""

from __future__ import annotations

from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1

# splitmix64 increment and finalizer multipliers
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX1 & _MASK64
    z = (z ^ (z >> 27)) * _MIX2 & _MASK64
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    """Fold nonnegative integers into one 64-bit stream key.

    Each part is absorbed with an add-then-finalize splitmix64 round, so the
    key depends on the values and on their order.  Parts wider than 64 bits
    are truncated to their low 64 bits.
    """
    key = 0
    for part in parts:
        if part < 0:
            raise ValueError(f"stream key parts must be nonnegative, got {part}")
        key = _finalize((key + _GOLDEN + (part & _MASK64)) & _MASK64)
    return key


def stream(key: int) -> Generator:
    """Fresh counter-based generator owned by the caller, keyed by ``key``."""
    return Generator(Philox(key=key & _MASK64))

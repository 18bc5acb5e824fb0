"""Seed derivation and counter-based generators.

Every stochastic operation receives an explicit 64-bit seed and builds its
own Philox generator from it, so results are bit-reproducible regardless of
call order, chunking, or thread count.  Harness-level streams are derived
from a master seed via ``derive_seed(master, purpose_tag, index)``.
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, tag: str, index: int = 0) -> int:
    """Derive a child seed from (master seed, purpose tag, index).

    Uses blake2b so the mapping is stable across processes and platforms
    (unlike the builtin ``hash``).
    """
    h = hashlib.blake2b(digest_size=8)
    h.update((master_seed & _MASK64).to_bytes(8, "little"))
    h.update(tag.encode("utf-8"))
    h.update((index & _MASK64).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


def generator(seed: int) -> np.random.Generator:
    """Fresh counter-based generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed & _MASK64)))

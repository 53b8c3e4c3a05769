"""Deterministic named random streams.

One 64-bit master seed fans out into independent Philox (counter-based)
streams, one per named consumer, so adding a consumer never perturbs the
draws of any other.
"""

import hashlib

import numpy as np


def stream(seed: int, name: str) -> np.random.Generator:
    """Independent generator for consumer `name` under a master seed."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "big") for i in range(0, 16, 4)]
    ss = np.random.SeedSequence([seed, *words])
    return np.random.Generator(np.random.Philox(ss))

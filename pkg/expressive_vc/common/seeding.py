"""Seed derivation shared by every randomized stage.

All randomness flows from one user seed. Each stage hashes (seed, stage name)
into its own 64-bit sub-seed and draws from a PCG64 generator, so stages stay
isolated while the whole run remains reproducible across platforms.
"""
import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def derive_seed(seed: int, stage: str) -> int:
    """Derive the 64-bit sub-seed of a named stage"""
    digest = hashlib.blake2b(
        f"{seed & SEED_MASK}:{stage}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


def make_rng(seed: int, stage: str = "") -> np.random.Generator:
    """PCG64 generator for a seed, optionally namespaced by stage"""
    value = derive_seed(seed, stage) if stage else seed & SEED_MASK
    return np.random.Generator(np.random.PCG64(value))

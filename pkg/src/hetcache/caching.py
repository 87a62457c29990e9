"""Zipf file popularity and the most-popular-content cache hit ratio.

Partial sums are computed with exact compensated accumulation (math.fsum)
so hit ratios are bit-reproducible; no harmonic-number approximation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IndexOutOfLibrary
from .params import CacheParams


@lru_cache(maxsize=256)
def _zipf_normalizer(library_size: int, zipf_exponent: float) -> float:
    """Sum of g^-gamma over the whole library."""
    return math.fsum(g ** -zipf_exponent for g in range(1, library_size + 1))


@lru_cache(maxsize=1024)
def _head_mass(head: int, library_size: int, zipf_exponent: float) -> float:
    """Sum of f^-gamma over the first `head` files."""
    return math.fsum(f ** -zipf_exponent for f in range(1, head + 1))


@dataclass(frozen=True)
class PopularityProfile:
    """Full popularity vector p_1..p_F plus its normalizer."""

    probabilities: tuple  # p_f for f = 1..F, non-increasing, sums to 1
    normalizer: float  # sum of g^-gamma over the library

    @staticmethod
    def from_params(cache: CacheParams) -> "PopularityProfile":
        z = _zipf_normalizer(cache.library_size, cache.zipf_exponent)
        ranks = np.arange(1, cache.library_size + 1, dtype=float)
        probs = ranks ** -cache.zipf_exponent / z
        return PopularityProfile(probabilities=tuple(probs), normalizer=z)


def zipf_popularity(cache: CacheParams, f: int) -> float:
    """Request probability of file f under the Zipf popularity model."""
    if not 1 <= f <= cache.library_size:
        raise IndexOutOfLibrary(
            f"file index {f} outside library [1, {cache.library_size}]")
    return f ** -cache.zipf_exponent / _zipf_normalizer(
        cache.library_size, cache.zipf_exponent)


def cache_hit_ratio(cache: CacheParams) -> float:
    """Probability that a requested file is among the C most popular files
    cached at an SBS. Zero for an empty cache, one for the full library."""
    if cache.cache_size == 0:
        return 0.0
    if cache.cache_size == cache.library_size:
        return 1.0
    return (_head_mass(cache.cache_size, cache.library_size, cache.zipf_exponent)
            / _zipf_normalizer(cache.library_size, cache.zipf_exponent))

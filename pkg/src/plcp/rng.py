"""Seeded, replication-indexed random streams.

Each replication gets an independent counter-based Philox stream whose
128-bit key is a SplitMix64 mix of (master_seed, replication_index), so the
stream is a pure function of the pair and replications can run in any order
or in parallel without affecting results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SeedSpec", "GENERATOR_NAME", "splitmix64", "stream_key"]

GENERATOR_NAME = "philox4x64/splitmix64-streams"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 output step (finalizer included)."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(master_seed: int, replication_index: int) -> int:
    """128-bit Philox key for one replication stream."""
    hi = splitmix64(master_seed & _MASK64)
    lo = splitmix64(hi ^ splitmix64(replication_index & _MASK64))
    return (hi << 64) | lo


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one replication stream: (master_seed, replication_index)."""

    master_seed: int
    replication_index: int = 0

    def __post_init__(self):
        if self.replication_index < 0:
            raise ValueError("replication_index must be nonnegative")

    def rng(self) -> np.random.Generator:
        key = stream_key(self.master_seed, self.replication_index)
        return np.random.Generator(np.random.Philox(key=key))

    def replication(self, index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, index)

    def substream(self, offset: int) -> "SeedSpec":
        """Disjoint stream family derived from this one (offset >= 0)."""
        return SeedSpec(
            splitmix64(self.master_seed ^ splitmix64(0xA5A5A5A5 + offset)),
            self.replication_index,
        )

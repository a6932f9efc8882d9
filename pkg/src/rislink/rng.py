"""Deterministic random-stream derivation for reproducible trials."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Named random stream: (seed, stream_id) fully determines every draw.

    Streams with the same seed but different stream ids are statistically
    independent, so per-trial streams can be consumed in any order, or in
    parallel, without changing results.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in an unsigned 64-bit int, got {self.seed}")
        if not 0 <= int(self.stream_id) < 2**64:
            raise ValueError(f"stream_id must fit in an unsigned 64-bit int, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.default_rng(np.random.SeedSequence((int(self.seed), int(self.stream_id))))


def as_generator(rng: "RngStream | np.random.Generator") -> np.random.Generator:
    """Accept either a stream handle or an already-instantiated generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")

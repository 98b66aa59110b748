"""Seed discipline.

All randomness in a run flows from one 64-bit scenario seed through named
substreams. A substream is identified by its name plus optional integer keys
(round index, client id, ...), so draws in one stream never shift another.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Named substreams. Values are part of the reproducibility contract."""

    DATA = 1
    VALIDATION = 2
    TRAINING = 3
    ATTACK = 4
    RL = 5
    NETWORK = 6
    DP = 7
    COMMITTEE = 8
    TOPOLOGY = 9
    SYBIL = 10


def substream(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Create a generator for a named substream.

    Args:
        seed: Scenario seed (0 <= seed < 2**64)
        stream: Substream name
        *keys: Additional non-negative integer keys (e.g. round, client id)

    Returns:
        PCG64 generator, identical across runs and platforms for equal inputs
    """
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if any(k < 0 for k in keys):
        raise ValueError("substream keys must be non-negative")
    entropy = [int(seed), int(stream), *(int(k) for k in keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

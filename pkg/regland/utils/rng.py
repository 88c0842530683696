"""
Counter-based random streams.

Every random number in regland is drawn from numpy's Philox4x64-10 bit
generator. A stream is addressed by a 64-bit seed and a stream id; the pair is
packed into the 128-bit Philox key, so two streams never overlap and the same
(seed, stream id) gives the same numbers on every platform numpy supports.
"""

import numpy as np

GENERATOR_NAME = "Philox4x64-10"

_MASK64 = (1 << 64) - 1

# Stream ids, one per purpose.
POTENTIAL_STREAM = 0
RHS_STREAM = 1
EIGEN_START_STREAM = 2
PATH_STREAM_BASE = 1 << 32


def philox_key(seed: int, stream_id: int = 0) -> int:
    """Pack (seed, stream id) into a 128-bit Philox key."""
    if seed < 0 or seed > _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")

    return ((stream_id & _MASK64) << 64) | (seed & _MASK64)


def stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """
    Random generator for one (seed, stream id) pair.

    Example Usage:
        ```python
        rng = stream(7, POTENTIAL_STREAM)
        values = rng.uniform(0.0, 1e5, size=20)
        ```
    """
    return np.random.Generator(np.random.Philox(key=philox_key(seed, stream_id)))


def derive_seed(seed: int, *path: int) -> int:
    """
    Child seed for a sub-experiment (one start point of a sweep, for example),
    derived with numpy's SeedSequence so children of one seed are independent.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])

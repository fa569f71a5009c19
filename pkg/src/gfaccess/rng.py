"""Counter-based random streams so results do not depend on trial counts."""
import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the counter ``key`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def chunk_streams(seed: int, trials: int, chunk: int):
    """Yield ``(generator, n)`` for consecutive fixed-size chunks of trials.

    Chunk ``c`` always covers trials ``c*chunk ...`` with the same stream, so
    extending ``trials`` leaves earlier trials unchanged.
    """
    for c, start in enumerate(range(0, trials, chunk)):
        yield stream(seed, c), min(chunk, trials - start)

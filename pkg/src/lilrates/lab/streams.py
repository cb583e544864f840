""" Per-path random streams

    Path `stream` of a run seeded with `seed` always reads the same Philox
    counter stream, whatever the number of paths, chunks or workers."""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np

from lilrates.errors import DomainError

# paths are simulated and reduced in chunks of this many streams
PATH_CHUNK = 1024


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    if seed < 0 or stream < 0:
        raise DomainError("seed and stream must be non-negative integers")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def chunk_bounds(paths: int, chunk: int = PATH_CHUNK) -> Iterator[tuple[int, int]]:
    """[start, stop) path ranges, in order"""
    for start in range(0, paths, chunk):
        yield start, min(start + chunk, paths)


def nb_chunks(paths: int, chunk: int = PATH_CHUNK) -> int:
    return -(-paths // chunk)

from typing import Iterable, List, Sequence

__all__ = ["_iterate_chunks", "replica_seeds"]


def _iterate_chunks(iterable: Sequence, chunk_size: int) -> Iterable:
    """
    Yield consecutive slices of at most chunk_size elements from a sized
    sequence. The last slice may be shorter.

    Parameters
    ----------
    iterable : Sequence
        Sequence to chunk.
    chunk_size : int
        Size of chunks.

    Yields
    ------
    chunk : Sequence
        Slice of iterable.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be at least 1.")
    for i in range(0, len(iterable), chunk_size):
        yield iterable[i : i + chunk_size]


def replica_seeds(base_seed: int, replicas: int) -> List[int]:
    # Replica i always runs with base_seed + i
    return [base_seed + i for i in range(replicas)]

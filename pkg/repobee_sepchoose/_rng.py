"""Seeded, counter-based random streams.

.. module:: _rng
    :synopsis: Philox-based random streams. Edge sampling indexes the stream
        by pair rank, and per-trial seeds are split off a master seed.

The Philox generator is counter-based: the ``k``-th 64-bit word of the stream
keyed by ``seed`` is a pure function of ``(seed, k)``. :py:func:`pair_rows`
draws one double per vertex pair in rank order, so the pair of rank ``k``
(pairs ``(i, j)``, ``i < j``, ordered lexicographically) always consumes the
``k``-th word, regardless of how the draws are chunked.
"""
from typing import Iterator, Tuple

import numpy as np

from repobee_sepchoose import _exceptions

MAX_SEED = 2 ** 64 - 1


def make_rng(seed: int) -> np.random.Generator:
    """A numpy Generator backed by Philox keyed by ``seed``."""
    _check_seed(seed)
    return np.random.Generator(np.random.Philox(key=seed))


def pair_rows(n: int, seed: int) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(i, u)`` for each row ``i`` where ``u[j - i - 1]`` is the
    uniform draw for pair ``(i, j)``.
    """
    rng = make_rng(seed)
    for i in range(n - 1):
        yield i, rng.random(n - 1 - i)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Split a master seed into an independent 64-bit seed per index tuple.

    The split is ``SeedSequence(entropy=master_seed, spawn_key=indices)``,
    so the result depends only on the master seed and the indices, never on
    the order in which seeds are requested.
    """
    _check_seed(master_seed)
    sequence = np.random.SeedSequence(
        entropy=master_seed, spawn_key=tuple(indices)
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= MAX_SEED:
        raise _exceptions.ParameterError(
            f"seed must be a 64-bit unsigned integer, got {seed}"
        )

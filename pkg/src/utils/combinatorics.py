"""
Colex Combinatorics
Ranking, unranking and chunked enumeration of k-subsets in colex order
"""
from math import comb

import numpy as np

MAX_POINTS = 66

# BINOM[n, r] = C(n, r); C(66, 33) still fits in int64.
BINOM = np.array(
    [[comb(n, r) for r in range(MAX_POINTS + 1)] for n in range(MAX_POINTS + 1)],
    dtype=np.int64,
)


def binom_mod2(n: int, r: int) -> int:
    """C(n, r) mod 2 by Lucas' theorem."""
    if r < 0 or n < 0 or r > n:
        return 0
    return 1 if (n & r) == r else 0


def colex_rank(rows: np.ndarray) -> np.ndarray:
    """
    Colex rank of each sorted row.

    Args:
        rows: (N, k) array, every row strictly increasing

    Returns:
        int64 array of length N with rank sum_i C(rows[:, i], i + 1)
    """
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[None, :]
    ranks = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[1]):
        ranks += BINOM[rows[:, i].astype(np.intp), i + 1]
    return ranks


def colex_unrank(ranks, k: int) -> np.ndarray:
    """
    Inverse of colex_rank.

    Args:
        ranks: integer array of colex ranks
        k: subset size

    Returns:
        (N, k) int16 array of sorted rows
    """
    remaining = np.array(ranks, dtype=np.int64, copy=True).reshape(-1)
    out = np.empty((remaining.size, k), dtype=np.int16)
    for i in range(k, 0, -1):
        column = BINOM[:, i]
        c = np.searchsorted(column, remaining, side="right") - 1
        out[:, i - 1] = c
        remaining -= column[c]
    return out


def colex_table(n: int, k: int) -> np.ndarray:
    """All k-subsets of range(n) in colex order."""
    return colex_unrank(np.arange(comb(n, k), dtype=np.int64), k)


def colex_prefix_tasks(n: int, k: int, chunk_size: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """
    Split the k-subsets of range(n) into colex-contiguous tasks.

    Each task (limit, r, suffix) stands for every r-subset of range(limit)
    followed by the fixed larger elements in suffix.

    Returns:
        Tasks in colex order
    """
    tasks = []

    def split(limit: int, r: int, suffix: tuple[int, ...]):
        if comb(limit, r) <= chunk_size or r == 0:
            if comb(limit, r):
                tasks.append((limit, r, suffix))
            return
        for top in range(r - 1, limit):
            split(top, r - 1, (top,) + suffix)

    split(n, k, ())
    return tasks


def materialize_task(task: tuple[int, int, tuple[int, ...]]) -> np.ndarray:
    """Rows of one colex task as an (N, k) int16 array."""
    limit, r, suffix = task
    head = colex_table(limit, r)
    if not suffix:
        return head
    tail = np.broadcast_to(np.array(suffix, dtype=np.int16), (head.shape[0], len(suffix)))
    return np.hstack([head, tail])


def iter_colex_chunks(n: int, k: int, chunk_size: int = 200_000):
    """Yield all k-subsets of range(n) in colex order, chunk by chunk."""
    for task in colex_prefix_tasks(n, k, chunk_size):
        yield materialize_task(task)


def lex_sort_rows(rows: np.ndarray) -> np.ndarray:
    """Sort rows lexicographically (first column most significant)."""
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]

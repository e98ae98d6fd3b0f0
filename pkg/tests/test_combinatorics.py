from itertools import combinations
from math import comb

import numpy as np
import pytest

from src.utils.combinatorics import (
    binom_mod2,
    colex_prefix_tasks,
    colex_rank,
    colex_table,
    colex_unrank,
    iter_colex_chunks,
    lex_sort_rows,
)
from src.utils.parallel import run_chunks


def test_binom_mod2_matches_parity():
    for n in range(20):
        for r in range(n + 1):
            assert binom_mod2(n, r) == comb(n, r) % 2
    assert binom_mod2(3, 5) == 0


def test_colex_table_order_and_rank():
    rows = colex_table(7, 3)
    assert rows.shape == (comb(7, 3), 3)
    assert rows[0].tolist() == [0, 1, 2]
    assert rows[1].tolist() == [0, 1, 3]
    assert rows[-1].tolist() == [4, 5, 6]
    assert np.array_equal(colex_rank(rows), np.arange(rows.shape[0]))


def test_unrank_large_ranks():
    ranks = np.array([0, 1, comb(65, 7) - 1])
    rows = colex_unrank(ranks, 7)
    assert rows[-1].tolist() == list(range(58, 65))
    assert np.array_equal(colex_rank(rows), ranks)


@pytest.mark.parametrize("chunk", [1, 10, 1000])
def test_chunks_cover_every_subset_once(chunk):
    parts = list(iter_colex_chunks(9, 4, chunk))
    rows = np.concatenate(parts)
    assert np.array_equal(colex_rank(rows), np.arange(comb(9, 4)))
    if chunk >= 10:
        assert max(p.shape[0] for p in parts) <= chunk


def test_prefix_tasks_are_colex_contiguous():
    tasks = colex_prefix_tasks(12, 5, 50)
    assert sum(comb(limit, r) for limit, r, _ in tasks) == comb(12, 5)


def test_lex_sort_rows():
    rows = np.array([[1, 2], [0, 5], [0, 3]])
    assert lex_sort_rows(rows).tolist() == [[0, 3], [0, 5], [1, 2]]
    assert lex_sort_rows(np.zeros((0, 2))).shape == (0, 2)


def _square(x):
    return x * x


@pytest.mark.parametrize("jobs", [1, 2])
def test_run_chunks_preserves_order(jobs):
    assert run_chunks(_square, list(range(10)), jobs) == [x * x for x in range(10)]


def test_colex_rank_agrees_with_itertools():
    subsets = np.array(list(combinations(range(10), 3)))
    ordered = subsets[np.argsort(colex_rank(subsets))]
    assert np.array_equal(ordered, colex_table(10, 3))
